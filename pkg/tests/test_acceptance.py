"""The ten acceptance criteria, one test each.

A summary line per criterion is printed at the end of the run (see
conftest.py).  Wall-clock limits are asserted alongside the numbers."""
import math
import subprocess
import sys
import time
import warnings
from fractions import Fraction
from math import comb
from pathlib import Path

import numpy as np
import pytest

from hdx_forge.algebra import RingMatrix, make_field
from hdx_forge.complexes import (FormSpace, PartiteComplex, VectorSpace, coset_complex,
                                 isotropic_flag_complex, opposite_group_model, oriflamme_complex,
                                 standard_flag, transversal_complex_A, typed_isomorphic, weight)
from hdx_forge.complexes.small import (complete_bipartite, hexagon, octahedron,
                                       octahedron_symmetries, torus7)
from hdx_forge.cones import (ConeCertificate, budget_A, cone_add_vertices, cone_join_basic,
                             cone_join_from_zero, cone_join_general, cone_star, induction_engine,
                             provider_A, provider_C, provider_D, star_cone_in, subdivision_transfer,
                             validate_cone)
from hdx_forge.cones.search import generic_cone_search
from hdx_forge.expansion import (CochainSpace, SymmetryWitness, action, contract_cocycle,
                                 cosystolic_bound, cyclic, d0, h1_cb_exhaustive,
                                 h1_lower_bound_from_cone, h1_triviality_pi1, radius_h1_bound, symmetric)
from hdx_forge.groups import GenSet, generate_group
from hdx_forge.rootsys import (affinize, cartan_matrix, generate_roots, highest_root,
                               is_n_spherical, n_classical, purely_n_spherical, spherical)
from oracles import h1_oracle

ROOT = Path(__file__).resolve().parents[1]
criterion = pytest.mark.criterion


def _A(q, m):
    V = VectorSpace(make_field(q), m)
    return transversal_complex_A(V, standard_flag(V))


@criterion(1, "root systems by reflection closure")
def test_root_systems(detail):
    t = time.time()
    closed = {"A": lambda n: n * (n + 1), "C": lambda n: 2 * n * n, "D": lambda n: 2 * n * (n - 1)}
    for (kind, n), want in {("A", 2): 6, ("A", 3): 12, ("C", 3): 18, ("D", 4): 24}.items():
        R = generate_roots(cartan_matrix(kind, n))
        assert len(R.roots) == want == closed[kind](n)
        detail(f"|{kind}{n}|={len(R.roots)}")
    for (kind, n), h in {("A", 2): 2, ("C", 2): 3}.items():
        R = generate_roots(cartan_matrix(kind, n))
        assert R.height(highest_root(R)) == h
    assert time.time() - t < 1


@criterion(2, "affinized Cartan matrices")
def test_affinization(detail):
    t = time.time()
    for kind, n in (("A", 2), ("C", 2), ("D", 4)):
        aff = affinize(generate_roots(cartan_matrix(kind, n))).gcm
        assert is_n_spherical(aff, n) and purely_n_spherical(aff, n)
        assert not spherical(aff) and n_classical(aff, n)
        detail(f"{kind}{n}~ ok")
    assert time.time() - t < 1


@criterion(3, "coset complex of Z/6")
def test_cyclic_coset_complex(detail):
    t = time.time()
    F7 = make_field(7)

    def sub(a):
        return generate_group(GenSet(1, F7, (RingMatrix(1, (a,), F7),), ("x",)))

    # F7^* is cyclic of order 6 with generator 3; <6> has index 3, <2> has index 2
    G, H2, H3 = sub(3), sub(2), sub(6)
    assert (G.order, H2.order, H3.order) == (6, 3, 2)
    X = coset_complex(G, [H2, H3])
    assert X.f_vector() == [5, 6]
    assert typed_isomorphic(X, complete_bipartite(2, 3)) is not None
    w = weight(X)
    for k in range(-1, X.dim + 1):
        assert w.total(k) == Fraction(1)
    detail("K_{2,3}, weights sum to 1")
    assert time.time() - t < 1


@criterion(4, "opposite complexes")
def test_opposite_complexes(detail):
    t = time.time()
    F5, F3 = make_field(5), make_field(3)
    G5 = opposite_group_model(2, F5)
    assert G5.f_vector() == [50, 125]
    G3 = opposite_group_model(2, F3)
    assert G3.f_vector() == [18, 27]
    assert (np.bincount(G3.simplices(1).ravel()) == 3).all()
    assert set(G3.vtype[G3.simplices(1)].sum(axis=1)) == {1}
    for q, G in ((5, G5), (3, G3)):
        assert typed_isomorphic(_A(q, 3).X, G) is not None
    detail("A2/F5 [50,125], A2/F3 [18,27] cubic bipartite, flag model = group model")
    assert time.time() - t < 10


@criterion(5, "cone certification ladder")
def test_cone_ladder(detail):
    warnings.simplefilter("ignore")
    t = time.time()
    pt = PartiteComplex(1, [0], [(0,)])
    edge = PartiteComplex(2, [0, 1], [(0, 1)])
    path2 = PartiteComplex(2, [0, 1, 0], [(0, 1), (1, 2)])
    three = PartiteComplex(1, [0, 0, 0], [(0,), (1,), (2,)])
    tri = PartiteComplex(3, [0, 1, 2], [(0, 1, 2)])

    r = cone_star("w", edge)
    v = validate_cone(r.complex, r.cone)
    assert max(v.rad0, v.rad1) <= 1
    r = cone_join_basic(three, three)
    assert validate_cone(r.complex, r.cone).rad0 <= 2
    c0 = ConeCertificate(0, {0: (0,), 1: (0, 1), 2: (0, 1, 2)}, 0)
    r = cone_join_from_zero(path2, c0, pt)
    v = validate_cone(r.complex, r.cone)
    assert v.rad0 == 2 and v.rad1 <= 2 * 2 + 1
    C1 = star_cone_in(tri, 0, [1, 2])
    r = cone_join_general(tri, C1, pt)
    v = validate_cone(r.complex, r.cone)
    assert v.rad0 == 1 and v.rad1 <= 1
    X = PartiteComplex(3, [0, 1, 2, 2], [(0, 1, 2), (0, 1, 3)])
    C = cone_add_vertices(X, [0, 1, 2], star_cone_in(X, 0, [1, 2]), [3],
                          {3: ConeCertificate(0, {0: (0,), 1: (0, 1)}, 0)})
    v = validate_cone(X, C)
    assert max(v.rad0, v.rad1) <= 1 * (1 + 1)
    Y = PartiteComplex(2, [0, 1, 0, 1, 1], [(0, 1), (1, 2), (2, 3), (0, 4)])
    b = ConeCertificate(1, {1: (1,), 0: (1, 0), 2: (1, 2)}, 0)
    C = cone_add_vertices(Y, [0, 1, 2], b, [3, 4],
                          {3: ConeCertificate(2, {2: (2,)}, 0), 4: ConeCertificate(0, {0: (0,)}, 0)})
    assert validate_cone(Y, C).rad0 <= b.rad0() + 1
    detail("constructors ok")

    assert budget_A(2).R == [1, 18, 29502]
    S = _A(5, 3)
    C, er = induction_engine(provider_A(S))
    assert validate_cone(S.X, C).rad0 <= 3 + 2
    S = _A(5, 4)
    C, er = induction_engine(provider_A(S))
    v = validate_cone(S.X, C)
    assert max(v.rad0, v.rad1) <= 29502 and er.seed_within_bound
    detail(f"A3/F5 radii ({v.rad0},{v.rad1}) <= 29502")

    F = FormSpace(make_field(5), "alternating", 2)
    S = isotropic_flag_complex(F, F.chamber_E())
    C, er = induction_engine(provider_C(S))
    validate_cone(S.X, C)
    assert er.seed_bound <= 5 and er.seed_within_bound
    detail(f"C2/F5 seed ({er.seed_rad0}) <= {er.seed_bound}")

    F = FormSpace(make_field(3), "hyperbolic", 2)
    S = isotropic_flag_complex(F, F.chamber_E())
    C, er = induction_engine(provider_D(S))
    validate_cone(S.X, C)
    assert er.seed_within_bound
    F = FormSpace(make_field(3), "hyperbolic", 3)
    E = F.chamber_E()
    ST, SO = isotropic_flag_complex(F, E), oriflamme_complex(F, E)
    C, er = induction_engine(provider_D(ST))
    assert validate_cone(ST.X, C) and er.seed_within_bound
    Ct, tr = subdivision_transfer(ST, C, SO)
    v = validate_cone(SO.X, Ct)
    assert v.rad0 <= tr.c and v.rad1 <= 2 * tr.c
    detail(f"D3 transfer ({v.rad0},{v.rad1}) <= ({tr.c},{2 * tr.c})")
    assert time.time() - t < 300


@criterion(6, "exhaustive h1 against an independent enumerator")
def test_exhaustive_h1(detail):
    t = time.time()
    X = octahedron()
    C = generic_cone_search(X)
    bound = h1_lower_bound_from_cone(X, C, SymmetryWitness("automorphisms", tuple(octahedron_symmetries())))
    assert bound.certified
    for G in (cyclic(2), cyclic(3)):
        exact = h1_cb_exhaustive(X, G).value
        assert exact == h1_oracle(X, G)
        assert bound.value <= exact
        detail(f"{G.name}: h1={exact}")
    detail(f"cone bound {bound.value}")
    assert time.time() - t < 120


@criterion(7, "constructive triviality over S3 on A3/F5")
def test_constructive_triviality(detail):
    warnings.simplefilter("ignore")
    t = time.time()
    S = _A(5, 4)
    C, er = induction_engine(provider_A(S))
    sp = CochainSpace(S.X, symmetric(3))
    rng = np.random.default_rng(2024)
    for _ in range(100):
        phi = d0(sp.random0(rng))
        psi = contract_cocycle(S.X, C, phi, validated=True)
        # contract_cocycle asserts this internally; checked again here edge by edge
        assert (action(psi, phi).values == sp.G.identity).all()
    detail(f"100 cocycles on {S.X.n_vertices} vertices")
    assert time.time() - t < 300


@criterion(8, "pi_1 based H1 checker")
def test_pi1_checker(detail):
    t = time.time()
    assert h1_triviality_pi1(octahedron(), cyclic(2)).trivial
    r = h1_triviality_pi1(torus7(), cyclic(2))
    assert not r.trivial and r.n_classes == 4
    r6 = h1_triviality_pi1(hexagon(), cyclic(3))
    assert not r6.trivial and r6.n_homs == 3
    detail("octahedron trivial, torus 4 classes, hexagon nontrivial")
    assert time.time() - t < 10


@criterion(9, "large tier: congruence complex over F3 mod t^2+1")
def test_large_tier(detail, tmp_path):
    t = time.time()
    proc = subprocess.run([sys.executable, str(ROOT / "scripts" / "large_tier.py"), "--out", str(tmp_path)],
                          capture_output=True, text=True, timeout=1800)
    assert proc.returncode == 0, proc.stderr[-2000:]
    kv = dict(ln.split("=", 1) for ln in proc.stdout.splitlines() if "=" in ln)
    q = 9
    assert int(kv["group_order"]) == q ** 3 * (q ** 2 - 1) * (q ** 3 - 1) == 42456960
    for i in range(3):
        assert kv[f"H{i}.image_order"] == "27" and kv[f"H{i}.injective"] == "True"
    assert kv["pure"] == "True" and kv["dim"] == "2" and kv["n_types"] == "3"
    assert kv["partite"] == "True" and kv["connected"] == "True"
    assert kv["link_profile_all_vertices_match"] == "True"
    assert kv["link_isomorphic_to_opposite"].startswith("True")
    assert abs(float(kv["link_lambda2"]) - 1 / math.sqrt(3)) < 1e-3
    assert kv["trickling_down_vacuous"] == "True" and kv["local_target_vacuous"] == "True"
    assert float(kv["total_seconds"]) <= 1800 and float(kv["peak_rss_mb"]) <= 8192
    detail(f"{kv['vertices']} vertices, {kv['facets']} facets, link lambda2 {kv['link_lambda2']}, "
           f"{float(kv['total_seconds']):.0f} s, {float(kv['peak_rss_mb']):.0f} MB")
    assert time.time() - t < 1800


@criterion(10, "bound evaluators")
def test_bound_evaluators(detail):
    t = time.time()
    assert cosystolic_bound(0, 24) == 1 and isinstance(cosystolic_bound(0, 24), Fraction)
    assert radius_h1_bound(2, 4) == Fraction(1, comb(3, 3) * 4) == Fraction(1, 4)
    detail("1 and 1/4 exactly")
    assert time.time() - t < 1
