"""Cone constructors: stars, joins and adding vertices.

Every constructor works inside a host complex (vertex ids are the host's), so
the engine can grow one certificate through a filtration.  The public join
constructors also accept two standalone complexes and build the join first.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..complexes.core import PartiteComplex, join
from .certificate import ConeCertificate, ConeError


class EmptyY(ConeError):
    pass


class EmptyFactor(ConeError):
    pass


class DimensionTooSmall(ConeError):
    pass


class InvalidInputCone(ConeError):
    pass


class PreconditionViolated(ConeError):
    def __init__(self, clause: int, detail: str = ""):
        super().__init__(f"precondition {clause} violated {detail}".strip())
        self.clause = clause


class ScriptBuilder:
    """Records steps while maintaining the current loop."""

    def __init__(self, C: ConeCertificate, start):
        self.C = C
        self.loop = list(start)
        self.steps: list = []

    def tr_remove(self, p):
        a, b, c = self.loop[p], self.loop[p + 1], self.loop[p + 2]
        self.steps.append(("TR", p, a, b, c))
        del self.loop[p + 1]

    def tr_insert(self, p, b):
        a, c = self.loop[p], self.loop[p + 1]
        self.steps.append(("TR+", p, a, b, c))
        self.loop.insert(p + 1, b)

    def bt_remove(self, p):
        assert self.loop[p] == self.loop[p + 2]
        self.steps.append(("BT",  p))
        del self.loop[p + 1:p + 3]

    def bt_insert(self, p, y):
        self.steps.append(("BT+", p, y))
        self.loop[p + 1:p + 1] = [y, self.loop[p]]

    def insert_path_pair(self, p, path):
        """At position p (holding path[-1]) insert path^{-1} o path."""
        for k in range(len(path) - 1):
            self.bt_insert(p + k, path[len(path) - 2 - k])

    def ref(self, p, u, v):
        key, rev = self.C.edge_key(u, v)
        if key is None:
            raise ConeError(f"no script for edge ({u},{v}) to splice")
        s0 = self.C.start_of(key, rev)
        assert tuple(self.loop[p:p + len(s0)]) == s0, (self.loop, p, s0)
        self.steps.append(("REF", p, key, rev))
        self.loop[p:p + len(s0)] = [self.C.apex]

    def collapse_backtracks(self):
        """Remove backtracks until the loop is trivial or reduced."""
        changed = True
        while changed:
            changed = False
            for p in range(len(self.loop) - 2):
                if self.loop[p] == self.loop[p + 2]:
                    self.bt_remove(p)
                    changed = True
                    break

    def finish(self):
        self.collapse_backtracks()
        assert self.loop == [self.C.apex], self.loop
        return self.steps


# --------------------------------------------------------------------------
# host-level constructions
# --------------------------------------------------------------------------

def star_cone_in(X: PartiteComplex, w: int, others, kind: int = 1) -> ConeCertificate:
    """{w} * Y inside X where Y is spanned by `others` (all adjacent to w)."""
    others = list(others)
    C = ConeCertificate(w, {w: (w,)}, kind)
    for u in others:
        C.paths[u] = (w, u)
    if kind == 1:
        oset = set(others)
        for u in others:
            C.set_script(w, u, [("BT", 0)])
        for u in others:
            for v in X.adjacency_sets()[u]:
                if v in oset and u < v:
                    # (w;u;v;w) -TR-> (w;v;w) -BT-> (w)
                    C.set_script(u, v, [("TR", 0, w, u, v), ("BT", 0)])
    return C


def join_zero_cone_in(A, B) -> ConeCertificate:
    """0-cone of a join with parts A, B (all cross pairs adjacent): apex in A,
    every vertex within distance 2."""
    A, B = list(A), list(B)
    if not A or not B:
        raise EmptyFactor("both join factors must be nonempty")
    a, b = A[0], B[0]
    paths = {a: (a,)}
    for v in B:
        paths[v] = (a, v)
    for u in A[1:]:
        paths[u] = (a, b, u)
    return ConeCertificate(a, paths, 0)


def _cross_script(C: ConeCertificate, u, v):
    """u in the base with path P_u, v adjacent to every vertex of P_u: (cross
    edge of a join) peel P_u off against v, then backtrack."""
    P = C.paths[u]
    sb = ScriptBuilder(C, C.edge_start(u, v))
    # loop = P_u + (v, apex); remove P_u's vertices from the end
    for k in range(len(P) - 1, 0, -1):
        sb.tr_remove(k - 1)
    return sb.finish()


def _second_factor_script(C: ConeCertificate, u, v):
    sb = ScriptBuilder(C, C.edge_start(u, v))
    sb.tr_remove(0)
    return sb.finish()


def _two_sided_script(C: ConeCertificate, u, v, x):
    """Edge inside Y1 for the join from a 0-cone: insert x, then peel both paths against x."""
    Pu, Pv = C.paths[u], C.paths[v]
    sb = ScriptBuilder(C, C.edge_start(u, v))
    iu = len(Pu) - 1
    sb.tr_insert(iu, x)
    # loop = Pu + (x,) + reversed(Pv); x at index iu+1
    a, b = len(Pu) - 1, len(Pv) - 1
    while a > 0 or b > 0:
        if a > 0:
            sb.tr_remove(a - 1)  # (u_{a-1}; u_a; x)
            a -= 1
        if b > 0:
            xi = a + 1
            sb.tr_remove(xi)  # (x; v_b; v_{b-1})
            b -= 1
    return sb.finish()


def cone_join_in(X: PartiteComplex, C1: ConeCertificate, Y1, Y2, mode: str) -> ConeCertificate:
    """Cone on the join of Y1, Y2 inside X.  mode 'general' reuses the
    1-cone scripts of C1; mode 'zero' rebuilds Y1 edges with the
    two-sided contraction through a vertex of Y2."""
    Y1, Y2 = list(Y1), list(Y2)
    if not Y2:
        raise EmptyFactor("second factor is empty")
    v0 = C1.apex
    C = ConeCertificate(v0, {u: C1.paths[u] for u in Y1}, 1)
    for v in Y2:
        C.paths[v] = (v0, v)
    adj = X.adjacency_sets()
    s1, s2 = set(Y1), set(Y2)
    x = Y2[0]
    for u in Y1:
        for v in adj[u]:
            if v in s1 and u < v:
                if mode == "general":
                    key, rev = C1.edge_key(u, v)
                    if key is None:
                        raise InvalidInputCone(f"input cone has no script for ({u},{v})")
                    C.scripts[key] = C1.scripts[key]
                else:
                    C.set_script(u, v, _two_sided_script(C, u, v, x))
            elif v in s2:
                C.set_script(u, v, _cross_script(C, u, v))
    for u in Y2:
        for v in adj[u]:
            if v in s2 and u < v:
                C.set_script(u, v, _second_factor_script(C, u, v))
    return C


def add_vertices_in(X: PartiteComplex, C: ConeCertificate, present: set, W, link_cones: dict,
                    kind: int = 1) -> ConeCertificate:
    """Extend (kind 1, or kind 0 for graphs) the cone C of the full
    subcomplex on `present` by the vertices W.  `link_cones[w]` is a 0-cone of
    lk(w) restricted to `present`.  Mutates and returns C."""
    adj = X.adjacency_sets()
    W = list(W)
    wset = set(W)
    for w in W:
        if w in present:
            raise PreconditionViolated(1, f"vertex {w} already present")
        if adj[w] & wset:
            raise PreconditionViolated(2, f"vertex {w} is adjacent to another added vertex")
        L = adj[w] & present
        if not L:
            raise PreconditionViolated(3, f"vertex {w} has empty link in the subcomplex")
        Lc = link_cones[w]
        if kind == 0:
            # one-dimensional case: only the link apex is used
            if Lc.apex not in L:
                raise PreconditionViolated(4, f"link apex of {w} is not in its link")
            continue
        if set(Lc.paths) != L:
            raise PreconditionViolated(4, f"link cone of {w} does not span its link")
        for P in Lc.paths.values():
            for i in range(len(P) - 1):
                if P[i + 1] not in adj[P[i]] or P[i] not in L:
                    raise PreconditionViolated(4, f"link path of {w} leaves the link")
    for w in W:
        a = link_cones[w].apex
        C.paths[w] = tuple(C.paths[a]) + (w,)
    if kind == 1:
        for w in W:
            Lc = link_cones[w]
            a = Lc.apex
            for u in adj[w] & present:
                C.set_script(u, w, _adding_script(C, u, w, Lc.paths[u]))
    present |= wset
    return C


def _adding_script(C: ConeCertificate, u, w, link_path):
    """T_(u,w) for an added vertex w: walk the link path back to the link
    apex, splicing the base scripts T'_(x_j, x_{j-1})."""
    sb = ScriptBuilder(C, C.edge_start(u, w))
    xs = list(link_path)  # x_0 = link apex, ..., x_m = u
    for j in range(len(xs) - 1, 0, -1):
        c, x = xs[j], xs[j - 1]
        pc = len(C.paths[c]) - 1  # index of c in loop (loop = P_c + (w, ...))
        sb.tr_insert(pc, x)       # (c; w) -> (c; x; w)
        sb.insert_path_pair(pc + 1, C.paths[x])
        sb.ref(0, c, x)           # contract P_c (c;x) P_x^{-1}
    return sb.finish()


# --------------------------------------------------------------------------
# public constructors on standalone complexes
# --------------------------------------------------------------------------

@dataclass
class JoinResult:
    complex: PartiteComplex
    cone: ConeCertificate
    left: list
    right: list


def cone_star(w, Y: PartiteComplex) -> JoinResult:
    """1-cone of {w} * Y with both radii at most 1.

    The new apex gets vertex id 0 and label `w`; Y's vertices are shifted by 1.
    Scripts are always emitted, so the result is a 1-cone even when Y has no
    edges (then every script is a single backtrack)."""
    if Y.n_vertices == 0:
        raise EmptyY("Y must be nonempty")
    pt = PartiteComplex(1, [0], [(0,)], labels=[str(w)])
    X = join(pt, Y)
    C = star_cone_in(X, 0, range(1, X.n_vertices), kind=1)
    return JoinResult(X, C, [0], list(range(1, X.n_vertices)))


def cone_join_basic(Y1: PartiteComplex, Y2: PartiteComplex) -> JoinResult:
    """0-cone of Y1 * Y2 of radius at most 2."""
    if Y1.n_vertices == 0 or Y2.n_vertices == 0:
        raise EmptyFactor("both factors must be nonempty")
    X = join(Y1, Y2)
    A = list(range(Y1.n_vertices))
    B = list(range(Y1.n_vertices, X.n_vertices))
    return JoinResult(X, join_zero_cone_in(A, B), A, B)


def _embed(C1: ConeCertificate, shift: int = 0) -> ConeCertificate:
    def m(key):
        if isinstance(key, tuple) and len(key) == 2 and all(isinstance(t, int) for t in key):
            return (key[0] + shift, key[1] + shift)
        return key
    paths = {u + shift: tuple(x + shift for x in P) for u, P in C1.paths.items()}
    C = ConeCertificate(C1.apex + shift, paths, C1.kind)
    for key, s in C1.scripts.items():
        steps = []
        for st in s.steps:
            if st[0] == "REF":
                steps.append(("REF", st[1], m(st[2]), st[3]))
            elif st[0] == "BT+":
                steps.append(("BT+", st[1], st[2] + shift))
            elif st[0] in ("TR", "TR+"):
                steps.append((st[0], st[1], st[2] + shift, st[3] + shift, st[4] + shift))
            else:
                steps.append(st)
        start = None if s.start is None else tuple(x + shift for x in s.start)
        C.scripts[m(key)] = type(s)(steps, start)
    return C


def cone_join_from_zero(Y1: PartiteComplex, C1: ConeCertificate, Y2: PartiteComplex) -> JoinResult:
    """1-cone of Y1 * Y2 from a 0-cone of Y1 (dim Y1 >= 1)."""
    if Y1.dim < 1:
        raise DimensionTooSmall("Y1 must have dimension at least 1")
    if Y2.n_vertices == 0:
        raise EmptyFactor("Y2 must be nonempty")
    X = join(Y1, Y2)
    A = list(range(Y1.n_vertices))
    B = list(range(Y1.n_vertices, X.n_vertices))
    C = cone_join_in(X, _embed(C1), A, B, mode="zero")
    return JoinResult(X, C, A, B)


def cone_join_general(Y1: PartiteComplex, C1: ConeCertificate, Y2: PartiteComplex) -> JoinResult:
    """1-cone of Y1 * Y2 reusing a 1-cone of Y1."""
    from .certificate import validate_cone
    if Y2.n_vertices == 0:
        raise EmptyFactor("Y2 must be nonempty")
    try:
        validate_cone(Y1, C1, require_scripts=True)
    except ConeError as exc:
        raise InvalidInputCone(str(exc)) from exc
    X = join(Y1, Y2)
    A = list(range(Y1.n_vertices))
    B = list(range(Y1.n_vertices, X.n_vertices))
    C = cone_join_in(X, _embed(C1), A, B, mode="general")
    return JoinResult(X, C, A, B)


def cone_join_nac(Y1: PartiteComplex, C1: ConeCertificate | None, Y2: PartiteComplex) -> JoinResult:
    """Dispatch by dimension: point*point style joins, a 0-cone of a graph, or
    a 1-cone of a higher-dimensional factor."""
    if Y1.dim <= 0:
        return cone_join_basic(Y1, Y2)
    if Y1.dim == 1:
        return cone_join_from_zero(Y1, C1, Y2)
    return cone_join_general(Y1, C1, Y2)


def cone_add_vertices(X: PartiteComplex, base_vertices, C_base: ConeCertificate, W,
                      link_cones: dict) -> ConeCertificate:
    """Vertex addition on a standalone complex: returns a cone of the
    full subcomplex spanned by base_vertices + W (in X's vertex ids)."""
    present = set(base_vertices)
    C = C_base.copy()
    kind = 1 if X.dim >= 2 and C_base.kind == 1 else 0
    C.kind = kind
    return add_vertices_in(X, C, present, W, link_cones, kind=kind)


# --------------------------------------------------------------------------
# radius budgets
# --------------------------------------------------------------------------

@dataclass
class RadiusBudget:
    f: object
    ell: object
    n: int
    R: list
    S: list

    def __call__(self, k: int) -> int:
        return self.R[k]


def radius_budget(f, ell, n: int) -> RadiusBudget:
    """R(0) = 1, S(k) = max{2, R(k-1)}, R(k) = S^l f(k) + sum_{j=1}^{l} S^j."""
    R = [1]
    S = [None]
    for k in range(1, n + 1):
        s = max(2, R[k - 1])
        lk = ell(k)
        fk = f(k)
        val = s ** lk * fk + sum(s ** j for j in range(1, lk + 1))
        if isinstance(val, Fraction) and val.denominator == 1:
            val = int(val)
        S.append(s)
        R.append(val)
    return RadiusBudget(f, ell, n, R, S)


def budget_A(n: int) -> RadiusBudget:
    return radius_budget(lambda k: k + 2, lambda k: k + 1, n)


def budget_C(n: int) -> RadiusBudget:
    return radius_budget(lambda k: 2 * k + 3, lambda k: 2 * k + 2, n)


def join_nac_bound(r1: int, r2: int) -> int:
    return 2 * max(r1, r2) + 1


def adding_vertices_bound(r_link: int, r_base: int) -> int:
    return r_link * (r_base + 1)

