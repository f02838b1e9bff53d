"""Filtration providers for transversal subspace complexes.

Each provider picks a transversal line l, builds the seed complex as a star
of l followed by hub ladders (every added vertex has a hub adjacent to its
whole current link), and then lists the remaining vertices in dimension
layers.  The engine checks everything; providers only describe.
"""
from __future__ import annotations

import logging
import warnings
from math import comb

from ..complexes.buildings import SubspaceComplex
from .certificate import ConeCertificate, ConeError
from .constructors import budget_A, budget_C, radius_budget
from .engine import Filtration, Layer
from .search import Disconnected, bfs_zero_cone

log = logging.getLogger(__name__)


class NoTransversalLine(ConeError):
    pass


class NoIsotropicTransversalLine(ConeError):
    pass


class ClassConditionUnmet(UserWarning):
    pass


def _dims(S: SubspaceComplex):
    return [len(U) for U in S.subspaces]


def _contains(S, big, small) -> bool:
    return S.V.is_subspace(S.subspaces[small], S.subspaces[big])


def anchored_family_cone(S: SubspaceComplex, family, adj) -> ConeCertificate:
    """0-cone of the full subcomplex on `family`: a star around a vertex l of
    least dimension, then members U with U + l in the family hung from U + l,
    then everything else from its closest already reached neighbour, in
    descending dimension.  Falls back to a BFS tree if some vertex stays
    unreached."""
    fam = set(family)
    dims = _dims(S)
    ell = min(fam, key=lambda i: (dims[i], i))
    L = S.subspaces[ell]
    paths = {ell: (ell,)}
    for i in sorted(fam):
        if i != ell and i in adj[ell] and _contains(S, i, ell):
            paths[i] = (ell, i)
    for i in sorted(fam - set(paths), key=lambda i: (dims[i], i)):
        j = S.index.get(S.V.add(S.subspaces[i], L))
        if j in paths and j in adj[i]:
            paths[i] = paths[j] + (i,)
    for i in sorted(fam - set(paths), key=lambda i: (-dims[i], i)):
        nb = [j for j in adj[i] if j in paths]
        if nb:
            j = min(nb, key=lambda j: (len(paths[j]), j))
            paths[i] = paths[j] + (i,)
    if len(paths) != len(fam):
        return bfs_zero_cone(adj, fam)
    return ConeCertificate(ell, paths, 0)


def _side_cone(S, adj):
    def f(side):
        try:
            return anchored_family_cone(S, side, adj)
        except Disconnected:
            raise
    return f


def _pick_line(S: SubspaceComplex, err):
    lines = [i for i, U in enumerate(S.subspaces) if len(U) == 1]
    if not lines:
        raise err("no transversal line in the complex")
    return lines[0]


# --------------------------------------------------------------------------
# type A
# --------------------------------------------------------------------------

def provider_A(S: SubspaceComplex) -> Filtration:
    """Filtration of T_E(V) for the A_n class: seed = span of
    Y_0 = {U : U + l in T_E(V)}, built as the star of l followed by the
    ladder U -> U + l in ascending dimension; then the other vertices in
    descending dimension."""
    X = S.X
    V = S.V
    m = V.m
    n = X.dim
    if not S.size_condition.get("holds", True):
        warnings.warn(f"size condition fails: {S.size_condition}", ClassConditionUnmet)
    ell = _pick_line(S, NoTransversalLine)
    L = S.subspaces[ell]
    dims = _dims(S)
    plus = {}
    for i, U in enumerate(S.subspaces):
        j = S.index.get(V.add(U, L))
        if j is not None:
            plus[i] = j
    star = sorted(i for i, j in plus.items() if j == i and i != ell)
    seed_layers = []
    for d in range(1, m):
        W = sorted(i for i, j in plus.items() if j != i and dims[i] == d)
        if W:
            seed_layers.append(Layer(W, {i: plus[i] for i in W}, f"seed dim {d}"))
    layers = []
    for d in range(m - 1, 0, -1):
        W = sorted(i for i in range(len(dims)) if i not in plus and dims[i] == d)
        if W:
            layers.append(Layer(W, None, f"dim {d}"))
    adj = X.adjacency_sets()
    budget = (n + 2) + (n + 1) if n == 1 else budget_A(n).R[n]
    notes = {"line": V.label(L), "seed_size": len(plus), "size_condition": S.size_condition,
             "n_main_layers": len(layers), "ell_n": n + 1}
    return Filtration(X, ell, star, seed_layers, layers, seed_bound=n + 2, budget=budget,
                      side_cone=_side_cone(S, adj), notes=notes, name="A")


# --------------------------------------------------------------------------
# type C
# --------------------------------------------------------------------------

def _transversal_all(V, U, fam) -> bool:
    return all(V.transversal(U, F) for F in fam)


def c_seed_conditions(S: SubspaceComplex, ell: int) -> dict:
    """Vertex id -> which of the three seed conditions it satisfies
    (1, 2 or 3); vertices satisfying none are omitted."""
    V, form = S.V, S.form
    L = S.subspaces[ell]
    lp = form.perp(L)
    E = list(S.E)
    E_l = [V.add(F, L) for F in E]
    E_p = [V.intersect(F, lp) for F in E]
    E_pl = [V.add(F, L) for F in E_p]
    out = {}
    for i, U in enumerate(S.subspaces):
        has_l = V.is_subspace(L, U)
        in_lp = V.is_subspace(U, lp)
        if has_l:
            out[i] = 1
        elif in_lp:
            if _transversal_all(V, U, E_l):
                out[i] = 2
        elif len(U) > 1 and _transversal_all(V, U, E_p + E_l + E_pl):
            out[i] = 3
    return out


def provider_C(S: SubspaceComplex) -> Filtration:
    """Filtration of T_E(V) for the C_C class (alternating or Hermitian-type
    form).  Seed: star of l, then condition-2 members ascending with hub
    U + l, then condition-3 members descending with hub U cap l^perp.  Rest:
    Z = {U : l <= U or U transversal to E + l} ascending, then everything
    else descending."""
    X = S.X
    V, form = S.V, S.form
    if form is None:
        raise ConeError("provider C needs a form space")
    n = form.n - 1  # dimension of the building
    if not S.size_condition.get("holds", True):
        warnings.warn(f"size condition fails: {S.size_condition}", ClassConditionUnmet)
    ell = _pick_line(S, NoIsotropicTransversalLine)
    L = S.subspaces[ell]
    lp = form.perp(L)
    dims = _dims(S)
    cond = c_seed_conditions(S, ell)
    star = sorted(i for i, c in cond.items() if c == 1 and i != ell)
    seed_layers = []
    for d in range(1, form.n + 1):
        W = sorted(i for i, c in cond.items() if c == 2 and dims[i] == d)
        if W:
            seed_layers.append(Layer(W, {i: S.index.get(V.add(S.subspaces[i], L)) for i in W},
                                     f"seed cond2 dim {d}"))
    for d in range(form.n, 1, -1):
        W = sorted(i for i, c in cond.items() if c == 3 and dims[i] == d)
        if W:
            seed_layers.append(Layer(W, {i: S.index.get(V.intersect(S.subspaces[i], lp)) for i in W},
                                     f"seed cond3 dim {d}"))
    E_l = [V.add(F, L) for F in S.E]
    Z = {i for i, U in enumerate(S.subspaces)
         if V.is_subspace(L, U) or _transversal_all(V, U, E_l)}
    layers = []
    for d in range(1, form.n + 1):
        W = sorted(i for i in Z if i not in cond and dims[i] == d)
        if W:
            layers.append(Layer(W, None, f"Z dim {d}"))
    for d in range(form.n, 0, -1):
        W = sorted(i for i in range(len(dims)) if i not in cond and i not in Z and dims[i] == d)
        if W:
            layers.append(Layer(W, None, f"rest dim {d}"))
    adj = X.adjacency_sets()
    f = 2 * n + 3
    budget = f + (2 * n + 2) if n == 1 else budget_C(n).R[n]
    counts = {c: sum(1 for v in cond.values() if v == c) for c in (1, 2, 3)}
    notes = {"line": V.label(L), "seed_conditions": counts, "size_condition": S.size_condition,
             "n_main_layers": len(layers), "ell_n": 2 * n + 2}
    return Filtration(X, ell, star, seed_layers, layers, seed_bound=f, budget=budget,
                      side_cone=_side_cone(S, adj), notes=notes, name="C")


def _connected(adj, vs) -> bool:
    vs = set(vs)
    start = next(iter(vs))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x] & vs:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(vs)


def _attached_layers(adj, dims, present, rest):
    """Descending-dimension layers, except that a vertex waits until its link
    in the vertices placed so far is nonempty and is either two-sided (hence
    a join) or connected."""
    present = set(present)
    rest = set(rest)
    layers = []

    def ready(i):
        L = adj[i] & present
        if not L:
            return False
        lo = any(dims[j] < dims[i] for j in L)
        hi = any(dims[j] > dims[i] for j in L)
        return (lo and hi) or _connected(adj, L)

    while rest:
        cand = [i for i in rest if ready(i)]
        if not cand:
            raise ConeError(f"{len(rest)} vertices can never be attached")
        d = max(dims[i] for i in cand)
        W = sorted(i for i in cand if dims[i] == d)
        layers.append(Layer(W, None, f"dim {d}"))
        present |= set(W)
        rest -= set(W)
    return layers


# --------------------------------------------------------------------------
# type D (weak C_n model)
# --------------------------------------------------------------------------

def at_relation(form, U, A) -> bool:
    """U @ A: U^perp cap A is not totally isotropic."""
    return not form.totally_isotropic(form.V.intersect(form.perp(U), A))


def d_class_condition(S: SubspaceComplex) -> dict:
    """|K| >= 2 sum_j C(2n-2, j-1) e_j for E = E^perp."""
    n = S.form.n
    e = {}
    for F in S.E:
        e[len(F)] = e.get(len(F), 0) + 1
    lhs = 2 * sum(comb(2 * n - 2, j - 1) * e.get(j, 0) for j in range(1, 2 * n))
    q = S.V.K.order
    return {"name": "C_3", "lhs": lhs, "rhs": q, "holds": q >= lhs}


def d_seed_conditions(S: SubspaceComplex, ell: int) -> dict:
    form, V = S.form, S.V
    n = form.n
    L = S.subspaces[ell]
    lp = form.perp(L)
    E = list(S.E)
    E_p = [V.intersect(F, lp) for F in E]
    E_l = [V.add(F, L) for F in E]
    Fam = E + E_p + E_l + [V.add(F, L) for F in E_p]
    En_hat = [A for A in E if len(A) == n and not form.totally_isotropic(A)]
    Fn_hat = [A for A in Fam if len(A) == n and not form.totally_isotropic(A)]

    def at_all(U, fam):
        return all(at_relation(form, U, A) for A in fam)

    out = {}
    for i, U in enumerate(S.subspaces):
        d = len(U)
        if V.is_subspace(L, U):
            if form.transversal_to(U, E) and (d >= n or at_all(U, En_hat)):
                out[i] = 1
        elif V.is_subspace(U, lp):
            if d == n - 1:
                ok = _transversal_all(V, U, E) and at_all(U, En_hat)
            else:
                ok = _transversal_all(V, U, E + E_l) and at_all(U, Fn_hat)
            if ok:
                out[i] = 2
        elif d > 1 and all(form.tilde_transversal(U, F) for F in Fam) and (d >= n or at_all(U, Fn_hat)):
            out[i] = 3
    return out


def provider_D(S: SubspaceComplex) -> Filtration:
    """Filtration of the weak C_n model T_E(V) (hyperbolic form, tilde
    transversality).  For n = 2 the complex is a graph and the filtration is
    the BFS shells around l.  For n >= 3: star of l, ladder of condition-2
    members ascending (hub U + l), ladder of condition-3 members descending
    (hub U cap l^perp), then the rest in descending dimension."""
    X = S.X
    V, form = S.V, S.form
    if form is None or form.kind != "hyperbolic":
        raise ConeError("provider D needs the hyperbolic weak model")
    n = form.n
    cc = d_class_condition(S)
    if not cc["holds"]:
        warnings.warn(f"class condition fails: {cc}", ClassConditionUnmet)
    ell = _pick_line(S, NoIsotropicTransversalLine)
    L = S.subspaces[ell]
    adj = X.adjacency_sets()
    dims = _dims(S)
    if n == 2:
        from .search import eccentricity
        dist = eccentricity(adj, ell)
        shells = {}
        for v, k in dist.items():
            shells.setdefault(k, []).append(v)
        star = sorted(shells.get(1, []))
        layers = [Layer(sorted(shells[k]), None, f"distance {k}") for k in sorted(shells) if k >= 2]
        notes = {"line": V.label(L), "class_condition": cc, "n_main_layers": len(layers)}
        return Filtration(X, ell, star, [], layers, seed_bound=5, budget=5, notes=notes, name="D")
    lp = form.perp(L)
    cond = d_seed_conditions(S, ell)
    star = sorted(i for i, c in cond.items() if c == 1 and i != ell)
    seed_layers = []
    for d in range(1, n + 1):
        W = sorted(i for i, c in cond.items() if c == 2 and dims[i] == d)
        if W:
            seed_layers.append(Layer(W, {i: S.index.get(V.add(S.subspaces[i], L)) for i in W},
                                     f"seed A dim {d}"))
    for d in range(n, 1, -1):
        W = sorted(i for i, c in cond.items() if c == 3 and dims[i] == d)
        if W:
            seed_layers.append(Layer(W, {i: S.index.get(V.intersect(S.subspaces[i], lp)) for i in W},
                                     f"seed B dim {d}"))
    layers = _attached_layers(adj, dims, set(cond), [i for i in range(len(dims)) if i not in cond])
    f = 2 * n + 1
    k = X.dim
    # the sub-filtration bound is not tracked; this is the plain recursion with
    # the measured number of layers, reported as a heuristic only
    heur = radius_budget(lambda j: 2 * j + 3, lambda j: max(len(layers), 2 * j + 2), k).R[k]
    counts = {c: sum(1 for v in cond.values() if v == c) for c in (1, 2, 3)}
    notes = {"line": V.label(L), "seed_conditions": counts, "class_condition": cc,
             "n_main_layers": len(layers), "heuristic_budget": heur}
    return Filtration(X, ell, star, seed_layers, layers, seed_bound=f, budget=None,
                      side_cone=_side_cone(S, adj), notes=notes, name="D")
