"""Subspaces of F_q^m in reduced row echelon form.

A subspace is identified by its RREF basis (a tuple of row tuples), which is
canonical, so subspaces can be used directly as dictionary keys.  The spaces
involved are tiny (q^dim <= a few hundred vectors), so intersections are
computed through explicit vector sets, which is simple and exact.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

from ..algebra import FieldSpec


class VectorSpace:
    def __init__(self, field: FieldSpec, m: int):
        self.K = field
        self.m = m
        self._vec_cache: dict = {}

    # ----------------------------------------------------------- row ops
    def rref(self, rows) -> tuple:
        K = self.K
        M = [list(r) for r in rows if any(r)]
        out = []
        col = 0
        r = 0
        while r < len(M) and col < self.m:
            piv = next((i for i in range(r, len(M)) if M[i][col]), None)
            if piv is None:
                col += 1
                continue
            M[r], M[piv] = M[piv], M[r]
            inv = K.inv(M[r][col])
            M[r] = [K.mul(x, inv) for x in M[r]]
            for i in range(len(M)):
                if i != r and M[i][col]:
                    c = M[i][col]
                    M[i] = [K.sub(x, K.mul(c, y)) for x, y in zip(M[i], M[r])]
            r += 1
            col += 1
        return tuple(tuple(row) for row in M[:r])

    def span(self, rows) -> tuple:
        return self.rref(rows)

    def dim(self, U) -> int:
        return len(U)

    def add(self, U, W) -> tuple:
        return self.rref(list(U) + list(W))

    def vectors(self, U) -> frozenset:
        """All vectors of U (as tuples)."""
        hit = self._vec_cache.get(U)
        if hit is not None:
            return hit
        K = self.K
        out = set()
        for coeffs in itertools.product(range(K.order), repeat=len(U)):
            v = [0] * self.m
            for c, row in zip(coeffs, U):
                if c:
                    v = [K.add(x, K.mul(c, y)) for x, y in zip(v, row)]
            out.add(tuple(v))
        res = frozenset(out)
        if len(self._vec_cache) < 200000:
            self._vec_cache[U] = res
        return res

    def contains(self, U, v) -> bool:
        return len(self.rref(list(U) + [v])) == len(U)

    def is_subspace(self, U, W) -> bool:
        """U <= W."""
        if len(U) > len(W):
            return False
        Wv = self.vectors(W)
        return all(row in Wv for row in U)

    def intersect(self, U, W) -> tuple:
        if len(U) > len(W):
            U, W = W, U
        Wv = self.vectors(W)
        common = [v for v in self.vectors(U) if v in Wv]
        return self.rref(common)

    def dim_sum(self, U, W) -> int:
        return len(self.rref(list(U) + list(W)))

    def transversal(self, U, W) -> bool:
        """U cap W = 0 or U + W = V."""
        d = self.dim_sum(U, W)
        return d == len(U) + len(W) or d == self.m

    def zero(self) -> tuple:
        return ()

    def whole(self) -> tuple:
        return tuple(tuple(1 if i == j else 0 for j in range(self.m)) for i in range(self.m))

    def std(self, idx) -> tuple:
        """Span of standard basis vectors e_i, i in idx (0-based)."""
        return self.rref([tuple(1 if j == i else 0 for j in range(self.m)) for i in idx])

    def all_subspaces(self, d: int):
        """Every d-dimensional subspace, enumerated by pivot pattern."""
        K = self.K
        for piv in itertools.combinations(range(self.m), d):
            free = [(r, c) for r in range(d) for c in range(self.m) if c > piv[r] and c not in piv]
            for vals in itertools.product(range(K.order), repeat=len(free)):
                M = [[0] * self.m for _ in range(d)]
                for r in range(d):
                    M[r][piv[r]] = 1
                for (r, c), x in zip(free, vals):
                    M[r][c] = x
                yield tuple(tuple(row) for row in M)

    def label(self, U) -> str:
        return ";".join(",".join(str(x) for x in row) for row in U) or "0"


@lru_cache(maxsize=None)
def gaussian_binomial(m: int, d: int, q: int) -> int:
    if d < 0 or d > m:
        return 0
    num = den = 1
    for i in range(d):
        num *= q ** (m - i) - 1
        den *= q ** (i + 1) - 1
    return num // den
