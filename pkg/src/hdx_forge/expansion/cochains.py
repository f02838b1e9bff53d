"""Cochains with values in a (possibly non-Abelian) finite group.

A 1-cochain is stored once per edge {u < v} as phi(u, v); the reverse
orientation is the inverse.  Norms and distances are exact rationals:
weight numerators are facet counts over a common denominator.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..complexes.core import PartiteComplex, WeightFn
from .coefficients import CoeffGroup


class CochainError(ValueError):
    pass


class DimensionTooSmall(CochainError):
    pass


class NotACocycle(CochainError):
    pass


class NotAntisymmetric(CochainError):
    pass


def _keys(rows: np.ndarray, n: int) -> np.ndarray:
    k = np.zeros(rows.shape[0], dtype=object if n ** rows.shape[1] >= 2 ** 62 else np.int64)
    for j in range(rows.shape[1]):
        k = k * n + rows[:, j]
    return k


class CochainSpace:
    """Index structures for cochains on X with values in G."""

    def __init__(self, X: PartiteComplex, G: CoeffGroup):
        if X.dim < 1:
            raise DimensionTooSmall("cochains need at least one edge")
        self.X = X
        self.G = G
        self.nv = X.n_vertices
        self.edges = X.simplices(1)
        self.tris = X.simplices(2) if X.dim >= 2 else np.empty((0, 3), dtype=np.int64)
        self._ekeys = _keys(self.edges, self.nv)
        self._eorder = np.argsort(self._ekeys, kind="stable")
        t = self.tris
        # edge slots of (a,b), (b,c), (a,c) per triangle
        self.tri_edges = np.stack([self.edge_index(t[:, 0], t[:, 1]),
                                   self.edge_index(t[:, 1], t[:, 2]),
                                   self.edge_index(t[:, 0], t[:, 2])], axis=1) if len(t) else \
            np.empty((0, 3), dtype=np.int64)
        self._w = None

    @property
    def n_edges(self) -> int:
        return int(self.edges.shape[0])

    @property
    def n_tris(self) -> int:
        return int(self.tris.shape[0])

    def edge_index(self, u, v):
        """Row of the edge {u, v} (arrays allowed); raises if absent."""
        u, v = np.asarray(u), np.asarray(v)
        a, b = np.minimum(u, v), np.maximum(u, v)
        key = a.astype(np.int64) * self.nv + b
        pos = np.searchsorted(self._ekeys[self._eorder], key)
        pos = np.clip(pos, 0, len(self._eorder) - 1)
        idx = self._eorder[pos]
        if not np.all(self._ekeys[idx] == key):
            raise CochainError("pair is not an edge")
        return idx

    def weights(self):
        """(denominators, numerators) for vertices, edges, triangles aligned with
        this space's index order."""
        if self._w is None:
            W = WeightFn(self.X)
            out = {}
            for k, rows in ((0, None), (1, self.edges), (2, self.tris)):
                if k > self.X.dim:
                    break
                crow, cnt = W.counts(k)
                num = np.zeros(len(crow), dtype=np.int64)
                if k == 0:
                    num[crow[:, 0]] = cnt
                else:
                    kk = _keys(crow, self.nv)
                    mine = _keys(rows, self.nv)
                    order = np.argsort(mine, kind="stable")
                    pos = order[np.searchsorted(mine[order], kk)]
                    num[pos] = cnt
                out[k] = (W.denominator(k), num)
            self._w = out
        return self._w

    def weight_of(self, k: int, mask) -> Fraction:
        den, num = self.weights()[k]
        return Fraction(int(num[np.asarray(mask, dtype=bool)].sum()), den)

    # ---------------------------------------------------------------- builders
    def cochain0(self, values) -> "Cochain0":
        return Cochain0(self, values)

    def constant0(self, g: int) -> "Cochain0":
        return Cochain0(self, np.full(self.nv, g, dtype=np.int64))

    def trivial1(self) -> "Cochain1":
        return Cochain1(self, np.full(self.n_edges, self.G.identity, dtype=np.int64))

    def cochain1(self, values) -> "Cochain1":
        return Cochain1(self, values)

    def cochain1_from_ordered(self, mapping: dict) -> "Cochain1":
        """From {(u, v): g}; both orientations may be given and must agree."""
        G = self.G
        vals = np.full(self.n_edges, -1, dtype=np.int64)
        for (u, v), g in mapping.items():
            i = int(self.edge_index(u, v))
            g = int(g) if u < v else int(G.inv[g])
            if vals[i] >= 0 and vals[i] != g:
                raise NotAntisymmetric(f"phi({u},{v}) and phi({v},{u}) are not inverse")
            vals[i] = g
        if (vals < 0).any():
            raise CochainError("some edge has no value")
        return Cochain1(self, vals)

    def random0(self, rng) -> "Cochain0":
        return Cochain0(self, rng.integers(0, self.G.order, size=self.nv))

    def random1(self, rng) -> "Cochain1":
        return Cochain1(self, rng.integers(0, self.G.order, size=self.n_edges))


class Cochain0:
    def __init__(self, space: CochainSpace, values):
        self.space = space
        self.values = np.asarray(values, dtype=np.int64)
        if self.values.shape != (space.nv,):
            raise CochainError("0-cochain needs one value per vertex")

    def __call__(self, v: int) -> int:
        return int(self.values[v])

    def __eq__(self, other):
        return isinstance(other, Cochain0) and np.array_equal(self.values, other.values)

    def inverse(self) -> "Cochain0":
        return Cochain0(self.space, self.space.G.inv[self.values])

    def __mul__(self, other: "Cochain0") -> "Cochain0":
        return Cochain0(self.space, self.space.G.mul[self.values, other.values])

    def support(self) -> np.ndarray:
        return self.values != self.space.G.identity

    def norm(self) -> Fraction:
        return self.space.weight_of(0, self.support())


class Cochain1:
    def __init__(self, space: CochainSpace, values):
        self.space = space
        self.values = np.asarray(values, dtype=np.int64)
        if self.values.shape != (space.n_edges,):
            raise CochainError("1-cochain needs one value per edge")

    def __call__(self, u: int, v: int) -> int:
        g = int(self.values[int(self.space.edge_index(u, v))])
        return g if u < v else int(self.space.G.inv[g])

    def __eq__(self, other):
        return isinstance(other, Cochain1) and np.array_equal(self.values, other.values)

    def ordered_items(self):
        G = self.space.G
        for (u, v), g in zip(self.space.edges, self.values):
            yield (int(u), int(v)), int(g)
            yield (int(v), int(u)), int(G.inv[g])

    def support(self) -> np.ndarray:
        return self.values != self.space.G.identity

    def norm(self) -> Fraction:
        return self.space.weight_of(1, self.support())


class TriangleValues:
    """d1 phi on the sorted orientation (a, b, c) of each triangle."""

    def __init__(self, space: CochainSpace, values):
        self.space = space
        self.values = np.asarray(values, dtype=np.int64)

    def support(self) -> np.ndarray:
        return self.values != self.space.G.identity

    def norm(self) -> Fraction:
        return self.space.weight_of(2, self.support())

    def trivial(self) -> bool:
        return not self.support().any()


def d_minus1(space: CochainSpace, g: int) -> Cochain0:
    return space.constant0(g)


def d0(psi: Cochain0) -> Cochain1:
    S = psi.space
    G = S.G
    u, v = S.edges[:, 0], S.edges[:, 1]
    return Cochain1(S, G.mul[psi.values[u], G.inv[psi.values[v]]])


def d1(phi: Cochain1) -> TriangleValues:
    S = phi.space
    if S.X.dim < 2:
        raise DimensionTooSmall("d1 needs triangles")
    G = S.G
    e = S.tri_edges
    ab, bc, ac = phi.values[e[:, 0]], phi.values[e[:, 1]], phi.values[e[:, 2]]
    return TriangleValues(S, G.mul[G.mul[ab, bc], G.inv[ac]])


def d1_ordered(phi: Cochain1, v0: int, v1: int, v2: int) -> int:
    """phi(v0,v1) phi(v1,v2) phi(v2,v0) for any ordering of a triangle."""
    if not phi.space.X.has_triangle(v0, v1, v2):
        raise CochainError("not a triangle")
    return phi.space.G.product(phi(v0, v1), phi(v1, v2), phi(v2, v0))


def is_cocycle(phi: Cochain1) -> bool:
    if phi.space.X.dim < 2:
        return True
    return d1(phi).trivial()


def action(psi: Cochain0, phi: Cochain1, check: bool = True) -> Cochain1:
    """(psi . phi)(u, v) = psi(u) phi(u, v) psi(v)^-1."""
    if check and not is_cocycle(phi):
        raise NotACocycle("the C0 action is defined on cocycles")
    S = phi.space
    G = S.G
    u, v = S.edges[:, 0], S.edges[:, 1]
    return Cochain1(S, G.mul[G.mul[psi.values[u], phi.values], G.inv[psi.values[v]]])


def dist(a, b) -> Fraction:
    """Weight of the cells where a * b^-1 is not the identity."""
    if type(a) is not type(b):
        raise CochainError("dist compares cochains of the same degree")
    G = a.space.G
    diff = G.mul[a.values, G.inv[b.values]] != G.identity
    return a.space.weight_of(0 if isinstance(a, Cochain0) else 1, diff)


def norm(c) -> Fraction:
    return c.norm()
