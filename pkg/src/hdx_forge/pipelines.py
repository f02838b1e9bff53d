"""Named constructions shared by the CLI and the scripts.

Recipes are short strings so a complex can be rebuilt deterministically from
its name alone:

* ``opp-A3-F5``: opposite complex T_E(V) of type A_3 over F_5 (standard flag)
* ``opp-C2-F5``: isotropic flags transversal to a chamber, alternating form
* ``opp-D3-F3``: oriflamme complex (thick D_3 building part)
* ``weak-D3-F3``: weak C_n model with a hyperbolic form
* ``group-A2-F5``: coset-complex model of the type A opposite complex
* ``cong-A2-F3-t^2+1``: congruence KMS complex
* any name in complexes.small.NAMED
"""
from __future__ import annotations

import gc
import logging
import re
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from .algebra import make_field, parse_poly, poly_is_irreducible, ReducibleModulus
from .complexes.buildings import (FormSpace, SubspaceComplex, isotropic_flag_complex,
                                  opposite_group_model, oriflamme_complex, standard_flag,
                                  transversal_complex_A)
from .complexes.core import (PartiteComplex, coset_complex, coset_complex_from_spaces,
                             typed_isomorphic, vertex_link_profile)
from .complexes.linalg import VectorSpace
from .complexes.small import NAMED
from .expansion.spectral import random_walk_lambda2, spectral_target_local, trickling_down
from .groups import (coset_space, generate_group, generating_subset, injectivity_check,
                     kms_generators_A, phi_f_image, sl_order, subgroup_intersection)

log = logging.getLogger(__name__)


class UnknownInput(ValueError):
    pass


@dataclass
class Built:
    recipe: str
    X: PartiteComplex
    subspaces: SubspaceComplex | None = None
    form: FormSpace | None = None
    info: dict = field(default_factory=dict)
    witness_kind: str | None = None
    local_groups: list | None = None


_OPP = re.compile(r"(opp|weak|group)-([ABCD])(\d+)-F(\d+)(?:\^(\d+))?$")
_CONG = re.compile(r"cong-A(\d+)-F(\d+)-(.+)$")


def build(recipe: str, budget: int = 5 * 10 ** 7) -> Built:
    if recipe in NAMED:
        return Built(recipe, NAMED[recipe]())
    m = _OPP.match(recipe)
    if m:
        kind, typ, n, p, e = m.group(1), m.group(2), int(m.group(3)), int(m.group(4)), int(m.group(5) or 1)
        return build_opposite(kind, typ, n, p, e)
    m = _CONG.match(recipe)
    if m:
        return build_congruence(int(m.group(1)), int(m.group(2)), m.group(3), budget=budget)
    raise UnknownInput(f"unknown input {recipe!r}")


def build_opposite(kind: str, typ: str, n: int, p: int, e: int = 1) -> Built:
    K = make_field(p, e)
    q = K.order
    name = f"{kind}-{typ}{n}-F{p}" + (f"^{e}" if e > 1 else "")
    if kind == "group":
        if typ != "A":
            raise UnknownInput("the coset-complex model is implemented for type A")
        X = opposite_group_model(n, K)
        return Built(name, X, info={"group_order": X.group_data[0].order}, witness_kind="coset-translation")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if typ == "A":
            if kind != "opp":
                raise UnknownInput("type A has only the opp model")
            V = VectorSpace(K, n + 1)
            S = transversal_complex_A(V, standard_flag(V))
            return Built(name, S.X, S, None, {"q": q}, None)
        form_kind = {"C": "alternating", "B": "symmetric", "D": "hyperbolic"}[typ]
        F = FormSpace(K, form_kind, n)
        if typ == "D" and kind == "opp":
            S = oriflamme_complex(F, F.chamber_E())
        else:
            S = isotropic_flag_complex(F, F.chamber_E())
    S.X.name = name
    return Built(name, S.X, S, F, {"q": q}, None)


def build_congruence(n: int, p: int, f_text: str, budget: int = 5 * 10 ** 7) -> Built:
    """X(A_n, F_p, f) = CC(G; H_0..H_n) with G generated by the images of the
    KMS generators in SL_{n+1}(F_p[t]/(f))."""
    K = make_field(p)
    f = parse_poly(K, f_text)
    if f.degree < 2 or not poly_is_irreducible(f):
        raise ReducibleModulus(f"{f_text} is not irreducible of degree >= 2 over F_{p}")
    t0 = time.time()
    kms = kms_generators_A(n, K)
    Gimg = phi_f_image(kms.B, f)
    G = generate_group(Gimg, budget=budget)
    t1 = time.time()
    inj = []
    Hs = []
    for i, H in enumerate(kms.H):
        ok, pre, img = injectivity_check(H, f, budget=budget)
        inj.append({"index": i, "injective": ok, "preimage_order": pre, "image_order": img})
        Hs.append(generate_group(phi_f_image(H, f), budget=G.order))
    spaces = [coset_space(G, H) for H in Hs]
    X = coset_complex_from_spaces(spaces, name=f"cong-A{n}-F{p}-{f_text}")
    qf = p ** f.degree
    info = {
        "group_order": G.order,
        "expected_order": sl_order(n + 1, qf),
        "subgroup_orders": [H.order for H in Hs],
        "injectivity": inj,
        "closure_seconds": round(t1 - t0, 1),
        "small_field_warning": kms.small_field_warning,
        "q": p,
    }
    return Built(X.name, X, info=info, witness_kind="coset-translation", local_groups=Hs)


def link_model(b: Built, t: int) -> PartiteComplex:
    """CC(H_t; (H_t n H_j)_{j != t}), the coset model of a type-t vertex link."""
    Hs = b.local_groups
    H = Hs[t]
    H.gens = H.gens or generating_subset(H)
    parts = [subgroup_intersection(H, Hs[j]) for j in range(len(Hs)) if j != t]
    return coset_complex(H, parts, name=f"CC(H_{t})")


def congruence_link_report(b: Built, samples: int = 3, seed: int = 0) -> list[tuple[str, object]]:
    """Structural and spectral checks of a congruence complex against the
    opposite complex of the same type over the base field.

    The facet data is all that is kept: coset tables are dropped first so the
    checks fit next to a multi-million-vertex complex."""
    X = b.X
    n = X.n_types - 1
    p = b.info["q"]
    out: list[tuple[str, object]] = []
    X.coset_spaces = None
    b.subspaces = None
    gc.collect()
    t0 = time.time()
    out.append(("pure", X.is_pure))
    out.append(("dim", X.dim))
    out.append(("n_types", X.n_types))
    try:
        X.check_partite()
        out.append(("partite", True))
    except ValueError:
        out.append(("partite", False))
    out.append(("connected", X.is_connected()))
    out.append(("vertices", X.n_vertices))
    out.append(("facets", X.n_facets()))
    ref = build_opposite("group", "A", n, p).X
    rprof = vertex_link_profile(ref)
    prof = vertex_link_profile(X)
    ref_row = (ref.n_facets(), ref.n_vertices, int(rprof[:, 0].min()), int(rprof[:, 0].max()))
    rows_ok = bool((prof == np.array(ref_row)).all())
    out.append(("link_profile_reference", " ".join(map(str, ref_row))))
    out.append(("link_profile_all_vertices_match", rows_ok))
    rng = np.random.default_rng(seed)
    iso_ok = model_ok = True
    checked = 0
    lams = []
    for t in range(X.n_types):
        verts = X.vertices_of_type(t)
        model = link_model(b, t) if b.local_groups else None
        for v in rng.choice(verts, size=min(samples, verts.size), replace=False):
            L = X.link((int(v),)).compact_types()
            iso_ok &= typed_isomorphic(L, ref) is not None
            if model is not None:
                model_ok &= typed_isomorphic(L, model) is not None
            lams.append(random_walk_lambda2(L, method="dense").lambda2)
            checked += 1
    out.append(("link_isomorphic_to_opposite", f"{iso_ok} ({checked} sampled links, exact search)"))
    out.append(("link_matches_coset_model", f"{model_ok} ({checked} sampled links)"))
    lam = max(lams)
    out.append(("link_lambda2", f"{lam:.10f}"))
    out.append(("link_lambda2_spread", f"{max(lams) - min(lams):.3e}"))
    out.append(("link_lambda2_vs_inv_sqrt_q", f"{abs(lam - 1 / np.sqrt(p)):.3e}"))
    td = trickling_down(lam)
    out.append(("trickling_down_bound", f"{td['bound']:.6f}"))
    out.append(("trickling_down_vacuous", td["vacuous"]))
    target = spectral_target_local(p, n)
    out.append(("local_target", f"{target:.6f}"))
    out.append(("local_target_vacuous", target >= 1))
    out.append(("local_target_met", lam <= target))
    out.append(("check_seconds", round(time.time() - t0, 1)))
    return out
