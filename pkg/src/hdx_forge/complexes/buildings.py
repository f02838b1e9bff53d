"""Models of classical spherical buildings and their opposite complexes.

* group model: CC(U+; U_{I minus i}) for type A_n, U+ upper unitriangular;
* flag models: proper subspaces (type A) or totally isotropic subspaces of a
  form space (types B/C, weak C_n), restricted to subspaces transversal to a
  set E of subspaces;
* the oriflamme model for D_n (dimension n-1 dropped, Lagrangians of the two
  families become separate vertex types).
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from math import comb

import networkx as nx
import numpy as np

from ..algebra import FieldSpec, elementary_matrix
from ..groups import GenSet, generate_group
from .core import PartiteComplex, coset_complex
from .linalg import VectorSpace

log = logging.getLogger(__name__)


class FormKindMismatch(ValueError):
    pass


class WittIndexZero(ValueError):
    pass


class FieldTooSmall(UserWarning):
    pass


# --------------------------------------------------------------------------
# group model
# --------------------------------------------------------------------------

def _additive_basis(K: FieldSpec):
    return [K.p ** i for i in range(K.m)]


def unipotent_A(n: int, K: FieldSpec, skip=()):
    """<x_{alpha_i}(a) : i not in skip> inside SL_{n+1}(K), i in 1..n."""
    gens, labels = [], []
    for i in range(1, n + 1):
        if i in skip:
            continue
        for a in _additive_basis(K):
            gens.append(elementary_matrix(n, i, i + 1, a, K))
            labels.append(f"x{i}({a})")
    return GenSet(n + 1, K, tuple(gens), tuple(labels))


def opposite_group_model(n: int, K: FieldSpec) -> PartiteComplex:
    """CC(U+; (U_{I minus i})_{i=1..n}) for the A_n building over K."""
    if n < 1:
        raise ValueError("n >= 1 required")
    U = generate_group(unipotent_A(n, K), budget=10 ** 8)
    subs = [generate_group(unipotent_A(n, K, skip=(i,)), budget=U.order) for i in range(1, n + 1)]
    X = coset_complex(U, subs, name=f"opp-A{n}-F{K.order}")
    X.group_data = (U, subs)
    return X


# --------------------------------------------------------------------------
# generic flag complexes
# --------------------------------------------------------------------------

def flag_complex(vertices, vtype, n_types: int, incident, labels=None, name="") -> PartiteComplex:
    """Flag complex of a typed incidence structure via maximal cliques."""
    g = nx.Graph()
    g.add_nodes_from(range(len(vertices)))
    for a, b in incident:
        g.add_edge(a, b)
    cliques = [tuple(sorted(c)) for c in nx.find_cliques(g)]
    X = PartiteComplex(n_types, vtype, cliques, labels=labels, name=name, maximal=True)
    return X


def inclusion_pairs(V: VectorSpace, subspaces):
    """Index pairs (i, j) with subspaces[i] < subspaces[j] properly."""
    by_dim: dict[int, list[int]] = {}
    for i, U in enumerate(subspaces):
        by_dim.setdefault(len(U), []).append(i)
    dims = sorted(by_dim)
    vecsets = {i: V.vectors(subspaces[i]) for i in range(len(subspaces))}
    out = []
    for a, da in enumerate(dims):
        for db in dims[a + 1:]:
            for j in by_dim[db]:
                Wv = vecsets[j]
                for i in by_dim[da]:
                    if all(r in Wv for r in subspaces[i]):
                        out.append((i, j))
    return out


@dataclass
class SubspaceComplex:
    """A flag complex whose vertices are subspaces; keeps the dictionary
    between vertex ids and RREF keys."""

    X: PartiteComplex
    V: VectorSpace
    subspaces: list
    index: dict
    form: "FormSpace | None" = None
    E: tuple = ()
    size_condition: dict = field(default_factory=dict)

    def vid(self, U) -> int:
        return self.index[U]


# --------------------------------------------------------------------------
# type A
# --------------------------------------------------------------------------

def standard_flag(V: VectorSpace):
    return tuple(V.std(range(i)) for i in range(1, V.m))


def ca_size_condition(E, m: int, q: int) -> dict:
    """sum_j C(n, j-1) e_j <= |K| with dim V = n + 2."""
    n = m - 2
    e = {}
    for Ei in E:
        e[len(Ei)] = e.get(len(Ei), 0) + 1
    total = sum(comb(n, j - 1) * e.get(j, 0) for j in range(1, n + 2))
    return {"name": "C_A", "lhs": total, "rhs": q, "holds": total <= q}


def transversal_complex_A(V: VectorSpace, E=()) -> SubspaceComplex:
    """T_E(V): proper nonzero subspaces transversal to all of E, ordered by
    inclusion; type of U is dim U - 1."""
    E = tuple(E)
    subs = []
    for d in range(1, V.m):
        for U in V.all_subspaces(d):
            if all(V.transversal(U, Ei) for Ei in E):
                subs.append(U)
    vtype = [len(U) - 1 for U in subs]
    pairs = inclusion_pairs(V, subs)
    X = flag_complex(subs, vtype, V.m - 1, pairs, labels=[V.label(U) for U in subs],
                     name=f"T_E(F_{V.K.order}^{V.m})")
    cond = ca_size_condition(E, V.m, V.K.order)
    if not cond["holds"]:
        log.warning("C_A size condition fails (%s > %s); constructing anyway", cond["lhs"], cond["rhs"])
    return SubspaceComplex(X, V, subs, {U: i for i, U in enumerate(subs)}, None, E, cond)


# --------------------------------------------------------------------------
# form spaces
# --------------------------------------------------------------------------

KINDS = ("alternating", "hyperbolic", "symmetric")


class FormSpace:
    """Nondegenerate alternating or symmetric bilinear form on K^m, odd q.

    Basis e_1..e_n, f_1..f_n (and a final anisotropic vector for the odd
    symmetric kind) with f(e_i, f_i) = 1."""

    def __init__(self, K: FieldSpec, kind: str, n: int):
        if K.p == 2:
            raise FormKindMismatch("characteristic 2 is not supported")
        if kind not in KINDS:
            raise FormKindMismatch(f"unknown form kind {kind}")
        if n < 1:
            raise WittIndexZero("Witt index must be positive")
        self.K = K
        self.kind = kind
        self.n = n
        self.m = 2 * n + (1 if kind == "symmetric" else 0)
        m = self.m
        G = [[0] * m for _ in range(m)]
        for i in range(n):
            G[i][n + i] = 1
            G[n + i][i] = K.neg(1) if kind == "alternating" else 1
        if kind == "symmetric":
            G[m - 1][m - 1] = 2 % K.p
        self.gram = tuple(tuple(r) for r in G)
        self.V = VectorSpace(K, m)
        self._ti_cache: dict = {}

    @property
    def type_label(self) -> str:
        return {"alternating": "C", "hyperbolic": "D", "symmetric": "B"}[self.kind] + str(self.n)

    def f(self, x, y) -> int:
        K = self.K
        acc = 0
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self.gram[i]
            for j, yj in enumerate(y):
                if yj and row[j]:
                    acc = K.add(acc, K.mul(xi, K.mul(row[j], yj)))
        return acc

    def isotropic_vector(self, v) -> bool:
        return self.f(v, v) == 0  # Q(v) = f(v, v) / 2 in odd characteristic

    def perp(self, U) -> tuple:
        """U-perp as an RREF basis."""
        V = self.V
        if not U:
            return V.whole()
        K = self.K
        # rows of U * G; perp = null space of that matrix
        A = [[0] * self.m for _ in U]
        for r, u in enumerate(U):
            for j in range(self.m):
                acc = 0
                for i, ui in enumerate(u):
                    if ui and self.gram[i][j]:
                        acc = K.add(acc, K.mul(ui, self.gram[i][j]))
                A[r][j] = acc
        R = V.rref(A)
        pivots = [next(c for c in range(self.m) if row[c]) for row in R]
        free = [c for c in range(self.m) if c not in pivots]
        basis = []
        for fc in free:
            v = [0] * self.m
            v[fc] = 1
            for row, pc in zip(R, pivots):
                v[pc] = K.neg(row[fc])
            basis.append(tuple(v))
        return V.rref(basis)

    def totally_isotropic(self, U) -> bool:
        return all(self.f(a, b) == 0 for a in U for b in U)

    def ti_subspaces(self, d: int) -> list:
        """All totally isotropic subspaces of dimension d, sorted by key."""
        if d in self._ti_cache:
            return self._ti_cache[d]
        V = self.V
        if d == 0:
            out = [()]
        elif d == 1:
            out = sorted({V.rref([v]) for v in itertools.product(range(self.K.order), repeat=self.m)
                          if any(v) and self.isotropic_vector(v)})
        else:
            seen = set()
            for W in self.ti_subspaces(d - 1):
                Wv = V.vectors(W)
                for v in V.vectors(self.perp(W)):
                    if v in Wv or not self.isotropic_vector(v):
                        continue
                    seen.add(V.rref(list(W) + [v]))
            out = sorted(seen)
        self._ti_cache[d] = out
        return out

    def witt_index_check(self) -> bool:
        return bool(self.ti_subspaces(self.n)) and not self.ti_subspaces(self.n + 1) \
            if self.n + 1 <= self.m else bool(self.ti_subspaces(self.n))

    # standard flags ---------------------------------------------------------
    def std_ti(self, k: int) -> tuple:
        """span(e_1..e_k)."""
        return self.V.std(range(k))

    def std_lagrangian_alt(self) -> tuple:
        """span(e_1..e_{n-1}, f_n): the other Lagrangian through E_{n-1}."""
        return self.V.std(list(range(self.n - 1)) + [2 * self.n - 1])

    def chamber_E(self) -> tuple:
        """E(tau) = {E_i, E_i^perp} for the standard chamber.  For the
        hyperbolic kind the chamber is taken in the oriflamme geometry:
        E_1 < ... < E_{n-2} plus the two Lagrangians through E_{n-1}."""
        if self.kind == "hyperbolic":
            flag = [self.std_ti(k) for k in range(1, self.n - 1)]
            flag += [self.std_ti(self.n), self.std_lagrangian_alt()]
        else:
            flag = [self.std_ti(k) for k in range(1, self.n + 1)]
        out = []
        for E in flag:
            for F in (E, self.perp(E)):
                if F not in out:
                    out.append(F)
        return tuple(out)

    def lagrangian_class(self, U) -> int:
        """0 or 1: parity of n - dim(U cap E_n) for Lagrangian U."""
        ref = self.std_ti(self.n)
        return (self.n - len(self.V.intersect(U, ref))) % 2

    # transversality -----------------------------------------------------------
    def tilde_transversal(self, U, W) -> bool:
        V = self.V
        if V.transversal(U, W):
            return True
        if self.kind != "hyperbolic":
            return False
        n = self.n
        if len(U) == n and len(W) == n and self.totally_isotropic(U) and self.totally_isotropic(W):
            return len(V.intersect(U, W)) == 1
        return False

    def transversal_to(self, U, E) -> bool:
        if self.kind == "hyperbolic":
            return all(self.tilde_transversal(U, Ei) for Ei in E)
        return all(self.V.transversal(U, Ei) for Ei in E)


def cc_size_condition(S: FormSpace, E) -> dict:
    """N(E) for the thick cases, reported against |K|."""
    n, m = S.n, S.m
    e = {}
    for Ei in E:
        e[len(Ei)] = e.get(len(Ei), 0) + 1

    def eh(h, s):
        return sum(comb(2 * s, j) * e.get(h + j, 0) for j in range(0, 2 * s + 1))

    if S.kind == "alternating":
        N = eh(1, n - 1)
    elif m == 2 * n + 1:
        N = 2 * eh(2, n - 1)
    else:
        N = max(eh(2, n - 1) + eh(3, n - 1) + 1, 2 * eh(3, n - 1))
    q = S.K.order
    return {"name": "C_C", "lhs": N, "rhs": q, "holds": q >= N}


def isotropic_flag_complex(S: FormSpace, E=None) -> SubspaceComplex:
    """Flags of totally isotropic subspaces (dims 1..n), optionally restricted
    to subspaces transversal to E (tilde-transversal for the hyperbolic
    kind).  Type of U is dim U - 1."""
    subs = []
    for d in range(1, S.n + 1):
        for U in S.ti_subspaces(d):
            if E is None or S.transversal_to(U, E):
                subs.append(U)
    vtype = [len(U) - 1 for U in subs]
    pairs = inclusion_pairs(S.V, subs)
    X = flag_complex(subs, vtype, S.n, pairs, labels=[S.V.label(U) for U in subs],
                     name=f"iso-{S.type_label}-F{S.K.order}")
    cond = {}
    if E is not None and S.kind != "hyperbolic":
        cond = cc_size_condition(S, E)
        if not cond["holds"]:
            log.warning("C_C size condition fails (N=%s > q=%s); constructing anyway",
                        cond["lhs"], cond["rhs"])
    return SubspaceComplex(X, S.V, subs, {U: i for i, U in enumerate(subs)}, S,
                           tuple(E) if E is not None else (), cond)


def oriflamme_complex(S: FormSpace, E=None) -> SubspaceComplex:
    """Orifl(X~): totally isotropic subspaces of dim != n-1; U, W incident iff
    nested or dim(U cap W) = n-1.  Types 0..n-3 are dims 1..n-2, types n-2 and
    n-1 are the two Lagrangian families."""
    if S.kind != "hyperbolic":
        raise FormKindMismatch("the oriflamme model needs a hyperbolic symmetric form")
    n = S.n
    subs = []
    for d in list(range(1, n - 1)) + [n]:
        for U in S.ti_subspaces(d):
            if E is None or S.transversal_to(U, E):
                subs.append(U)
    V = S.V

    def vt(U):
        if len(U) < n:
            return len(U) - 1
        return n - 2 + S.lagrangian_class(U)

    vtype = [vt(U) for U in subs]
    pairs = list(inclusion_pairs(V, subs))
    lag = [i for i, U in enumerate(subs) if len(U) == n]
    for a, b in itertools.combinations(lag, 2):
        if len(V.intersect(subs[a], subs[b])) == n - 1:
            pairs.append((a, b))
    X = flag_complex(subs, vtype, n, pairs, labels=[V.label(U) for U in subs],
                     name=f"orifl-D{n}-F{S.K.order}")
    return SubspaceComplex(X, V, subs, {U: i for i, U in enumerate(subs)}, S,
                           tuple(E) if E is not None else ())
