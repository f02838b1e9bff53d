"""Generalized Cartan matrices, Dynkin diagrams, classical root systems and
affinization.

Convention: a_ij = 2 (alpha_i, alpha_j) / (alpha_j, alpha_j), so the simple
reflection s_j sends beta to beta - (sum_i beta_i a_ij) alpha_j.  With this
convention C_2 = [[2, -1], [-2, 2]] and alpha_n is the long root of C_n.
Roots are integer vectors over the simple roots; no Euclidean model is used.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction


class InvalidGCM(ValueError):
    pass


class ReducibleInput(ValueError):
    pass


class NonSphericalInput(ValueError):
    pass


@dataclass(frozen=True)
class GCM:
    index: tuple[int, ...]
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.index)
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise InvalidGCM("matrix shape does not match the index set")
        for a in range(n):
            if self.entries[a][a] != 2:
                raise InvalidGCM("diagonal entries must be 2")
            for b in range(n):
                if a == b:
                    continue
                x, y = self.entries[a][b], self.entries[b][a]
                if x > 0:
                    raise InvalidGCM("off-diagonal entries must be <= 0")
                if (x == 0) != (y == 0):
                    raise InvalidGCM("A_ij = 0 must imply A_ji = 0")

    @classmethod
    def from_rows(cls, rows, index=None):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if index is None:
            index = tuple(range(1, len(rows) + 1))
        return cls(tuple(index), rows)

    @property
    def rank(self) -> int:
        return len(self.index)

    def pos(self, i) -> int:
        return self.index.index(i)

    def a(self, i, j) -> int:
        return self.entries[self.pos(i)][self.pos(j)]

    def sub(self, J) -> "GCM":
        J = tuple(sorted(J, key=self.pos))
        return GCM(J, tuple(tuple(self.a(i, j) for j in J) for i in J))

    def components(self) -> list[tuple]:
        """Irreducible factors as index tuples."""
        seen, out = set(), []
        for s in self.index:
            if s in seen:
                continue
            comp, stack = [], [s]
            seen.add(s)
            while stack:
                i = stack.pop()
                comp.append(i)
                for j in self.index:
                    if j not in seen and self.a(i, j) != 0:
                        seen.add(j)
                        stack.append(j)
            out.append(tuple(sorted(comp, key=self.pos)))
        return out

    def is_irreducible(self) -> bool:
        return len(self.components()) == 1


# --------------------------------------------------------------------------
# standard matrices
# --------------------------------------------------------------------------

def cartan_matrix(kind: str, n: int) -> GCM:
    """Spherical classical Cartan matrices A_n, B_n, C_n, D_n on {1..n}."""
    kind = kind.upper()
    M = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    if kind in "ABC":
        for i in range(n - 1):
            M[i][i + 1] = M[i + 1][i] = -1
        if kind == "C" and n >= 2:
            M[n - 1][n - 2] = -2
        if kind == "B" and n >= 2:
            M[n - 2][n - 1] = -2
    elif kind == "D":
        if n < 3:
            raise ValueError("D_n needs n >= 3 here (D_2 is reducible)")
        for i in range(n - 2):
            M[i][i + 1] = M[i + 1][i] = -1
        M[n - 3][n - 1] = M[n - 1][n - 3] = -1
    else:
        raise ValueError(f"unknown classical type {kind}")
    return GCM.from_rows(M)


def parse_type(label: str) -> tuple[str, int]:
    label = label.strip().upper().replace("_", "")
    return label[0], int(label[1:])


# --------------------------------------------------------------------------
# diagrams
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DiagramEdge:
    i: object
    j: object
    multiplicity: int
    arrow_to: object = None
    bold: tuple[int, int] | None = None


@dataclass(frozen=True)
class DynkinDiagram:
    vertices: tuple
    edges: tuple[DiagramEdge, ...]

    def neighbours(self, v):
        for e in self.edges:
            if e.i == v:
                yield e.j
            elif e.j == v:
                yield e.i


def derive_diagram(A: GCM) -> DynkinDiagram:
    edges = []
    for a, b in itertools.combinations(A.index, 2):
        x, y = abs(A.a(a, b)), abs(A.a(b, a))
        if x == 0:
            continue
        if x * y > 4:
            edges.append(DiagramEdge(a, b, 1, None, (x, y)))
            continue
        # i is the endpoint with |A_ij| >= |A_ji|
        i, j = (a, b) if x >= y else (b, a)
        m = max(x, y)
        edges.append(DiagramEdge(i, j, m, i if m > 1 else None, None))
    return DynkinDiagram(tuple(A.index), tuple(edges))


def gcm_from_diagram(D: DynkinDiagram) -> GCM:
    """Inverse of derive_diagram for multiplicities <= 3."""
    idx = tuple(D.vertices)
    pos = {v: k for k, v in enumerate(idx)}
    M = [[2 if a == b else 0 for b in idx] for a in idx]
    for e in D.edges:
        i, j = pos[e.i], pos[e.j]
        if e.bold is not None:
            M[i][j], M[j][i] = -e.bold[0], -e.bold[1]
        elif e.arrow_to is None:
            M[i][j] = M[j][i] = -1
        else:
            big = pos[e.arrow_to]
            small = j if big == i else i
            M[big][small], M[small][big] = -e.multiplicity, -1
    return GCM(idx, tuple(tuple(r) for r in M))


# --------------------------------------------------------------------------
# symmetrisation and the finite-type test
# --------------------------------------------------------------------------

def symmetrizer(A: GCM) -> dict | None:
    """eps_j = (alpha_j, alpha_j) / 2 with a_ij eps_j = a_ji eps_i, normalised
    to min 1 per component.  None if A is not symmetrizable."""
    eps: dict = {}
    for comp in A.components():
        eps[comp[0]] = Fraction(1)
        stack = [comp[0]]
        while stack:
            i = stack.pop()
            for j in comp:
                if i == j or A.a(i, j) == 0:
                    continue
                val = eps[i] * Fraction(A.a(j, i), A.a(i, j))
                if j in eps:
                    if eps[j] != val:
                        return None
                else:
                    eps[j] = val
                    stack.append(j)
        lo = min(eps[c] for c in comp)
        for c in comp:
            eps[c] = eps[c] / lo
    return eps


def _det(M) -> Fraction:
    M = [[Fraction(x) for x in r] for r in M]
    n = len(M)
    d = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        d *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                for k in range(c, n):
                    M[r][k] -= f * M[c][k]
    return d


def is_finite_type(A: GCM) -> bool:
    """All principal minors positive (finite-type criterion for GCMs)."""
    n = A.rank
    rows = A.entries
    for k in range(1, n + 1):
        for S in itertools.combinations(range(n), k):
            if _det([[rows[i][j] for j in S] for i in S]) <= 0:
                return False
    return True


# --------------------------------------------------------------------------
# classification by diagram shape
# --------------------------------------------------------------------------

def classify(A: GCM) -> str:
    """Label of an irreducible GCM: 'A_n', 'B_n', 'C_n', 'D_n', or 'other'
    (exceptional and non-spherical shapes)."""
    if not A.is_irreducible():
        raise ReducibleInput("classify needs an irreducible matrix")
    n = A.rank
    if n == 1:
        return "A_1"
    D = derive_diagram(A)
    if any(e.bold for e in D.edges) or len(D.edges) != n - 1:
        return "other"  # cycles or bold edges
    deg = {v: 0 for v in A.index}
    for e in D.edges:
        deg[e.i] += 1
        deg[e.j] += 1
    mults = [e.multiplicity for e in D.edges]
    if max(deg.values()) <= 2:
        # path
        if all(m == 1 for m in mults):
            return f"A_{n}"
        if sorted(mults)[-1] == 2 and mults.count(2) == 1:
            e = next(x for x in D.edges if x.multiplicity == 2)
            ends = [v for v in A.index if deg[v] == 1]
            if n == 2:
                return "C_2"
            if e.i in ends or e.j in ends:
                leaf = e.i if e.i in ends else e.j
                return f"C_{n}" if e.arrow_to == leaf else f"B_{n}"
        return "other"
    if all(m == 1 for m in mults) and sorted(deg.values())[-1] == 3 and \
            sum(1 for d in deg.values() if d == 3) == 1:
        centre = next(v for v, d in deg.items() if d == 3)
        arms = []
        for nb in D.neighbours(centre):
            length, prev, cur = 1, centre, nb
            while deg[cur] == 2:
                nxt = next(x for x in D.neighbours(cur) if x != prev)
                prev, cur = cur, nxt
                length += 1
            arms.append(length)
        arms.sort()
        if arms[0] == 1 and arms[1] == 1:
            return f"D_{n}"
    return "other"


def spherical(A: GCM, J=None) -> bool:
    J = tuple(A.index) if J is None else tuple(J)
    if not J:
        return True
    return is_finite_type(A.sub(J))


def is_n_spherical(A: GCM, n: int) -> bool:
    return all(spherical(A, J) for J in itertools.combinations(A.index, n))


def purely_n_spherical(A: GCM, n: int) -> bool:
    sph_n = [set(J) for J in itertools.combinations(A.index, n) if spherical(A, J)]
    for k in range(0, len(A.index) + 1):
        for J in itertools.combinations(A.index, k):
            if spherical(A, J) and not any(set(J) <= S for S in sph_n):
                return False
    return True


def n_classical(A: GCM, n: int) -> bool:
    for k in range(1, n + 1):
        for J in itertools.combinations(A.index, k):
            sub = A.sub(J)
            for comp in sub.components():
                label = classify(sub.sub(comp))
                if label == "other":
                    return False
    return True


# --------------------------------------------------------------------------
# root systems
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RootSystemData:
    gcm: GCM
    simple: tuple[tuple[int, ...], ...]
    roots: frozenset
    positive: frozenset
    negative: frozenset

    @staticmethod
    def height(alpha) -> int:
        return sum(alpha)

    @property
    def rank(self):
        return self.gcm.rank


def reflect(A: GCM, beta, j: int):
    """s_j(beta) with j a position in the index tuple."""
    c = sum(beta[i] * A.entries[i][j] for i in range(A.rank))
    out = list(beta)
    out[j] -= c
    return tuple(out)


def generate_roots(A: GCM, limit: int = 100000) -> RootSystemData:
    label = classify(A) if A.is_irreducible() else "other"
    if label == "other" or not is_finite_type(A):
        raise NonSphericalInput(f"{label}: not a classical spherical matrix")
    n = A.rank
    simple = tuple(tuple(1 if k == i else 0 for k in range(n)) for i in range(n))
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for b in frontier:
            for j in range(n):
                r = reflect(A, b, j)
                if r not in roots:
                    roots.add(r)
                    nxt.append(r)
        if len(roots) > limit:
            raise NonSphericalInput("reflection closure did not terminate")
        frontier = nxt
    pos = frozenset(r for r in roots if all(x >= 0 for x in r))
    neg = frozenset(r for r in roots if all(x <= 0 for x in r))
    return RootSystemData(A, simple, frozenset(roots), pos, neg)


def closed_form_root_count(label: str) -> int:
    kind, n = label.split("_")
    n = int(n)
    return {"A": n * (n + 1), "B": 2 * n * n, "C": 2 * n * n, "D": 2 * n * (n - 1)}[kind]


def highest_root(R: RootSystemData):
    tops = [g for g in R.positive
            if all(tuple(a + b for a, b in zip(g, s)) not in R.roots for s in R.simple)]
    if len(tops) != 1:
        raise NonSphericalInput("highest root is not unique")
    return tops[0]


def inner_product(A: GCM, eps, x, y) -> Fraction:
    # (alpha_i, alpha_j) = a_ij * eps_j
    idx = A.index
    return sum(Fraction(x[i]) * y[j] * A.entries[i][j] * eps[idx[j]]
               for i in range(A.rank) for j in range(A.rank) if x[i] and y[j])


# --------------------------------------------------------------------------
# affinization
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineRoot:
    alpha: tuple[int, ...]
    m: int

    def is_positive(self, base: RootSystemData) -> bool:
        return self.m >= 1 or (self.m == 0 and self.alpha in base.positive)


@dataclass(frozen=True)
class AffineData:
    base: RootSystemData
    gamma: tuple[int, ...]
    gcm: GCM
    delta: str = "delta"

    def affine_root(self, alpha, m: int) -> AffineRoot:
        alpha = tuple(alpha)
        if alpha not in self.base.roots:
            raise ValueError("not a root of the base system")
        return AffineRoot(alpha, m)

    @property
    def alpha0(self) -> AffineRoot:
        return AffineRoot(tuple(-x for x in self.gamma), 1)


def affinize(R: RootSystemData) -> AffineData:
    A = R.gcm
    n = A.rank
    eps = symmetrizer(A)
    gamma = highest_root(R)
    vecs = [tuple(-x for x in gamma)] + list(R.simple)
    norms = [inner_product(A, eps, v, v) for v in vecs]
    M = []
    for i in range(n + 1):
        row = []
        for j in range(n + 1):
            val = 2 * inner_product(A, eps, vecs[i], vecs[j]) / norms[j]
            if val.denominator != 1:
                raise InvalidGCM("non-integral Cartan integer")  # pragma: no cover
            row.append(int(val))
        M.append(tuple(row))
    gcm = GCM(tuple(range(n + 1)), tuple(M))
    return AffineData(R, gamma, gcm)
