"""Exact coboundary expansion constants by exhaustive enumeration.

Ratios are exact: numerators and denominators are integer facet counts, so
every quotient is a Fraction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..complexes.core import PartiteComplex
from .coefficients import CoeffGroup
from .cochains import CochainSpace

DEFAULT_BUDGET = 10 ** 6


class SearchSpaceTooLarge(ValueError):
    def __init__(self, what: str, size: int, budget: int):
        shown = str(size) if size < 10 ** 15 else f"about 10^{int((size.bit_length() - 1) * math.log10(2))}"
        super().__init__(f"{what}: {shown} candidates exceed the budget {budget}")
        self.size = size
        self.budget = budget


@dataclass
class ExactResult:
    value: Fraction | None
    minimiser: tuple | None
    enumerated: int
    method: str

    def __float__(self):
        return float(self.value) if self.value is not None else float("inf")


def _digits(idx: np.ndarray, base: int, width: int) -> np.ndarray:
    """Rows of base-`base` digits, least significant first."""
    out = np.empty((idx.size, width), dtype=np.int64)
    x = idx.copy()
    for j in range(width):
        out[:, j] = x % base
        x //= base
    return out


def _exact_min(num, den, num_scale, den_scale):
    """Exact min over den > 0 of (num * num_scale) / (den * den_scale).
    Floats pick the candidates, Fractions decide."""
    ok = np.nonzero(den > 0)[0]
    if ok.size == 0:
        return None, None
    f = num[ok] / den[ok]
    near = ok[f <= f.min() * (1 + 1e-9) + 1e-300]
    best, arg = None, None
    for i in near:
        r = Fraction(int(num[i]) * num_scale, int(den[i]) * den_scale)
        if best is None or r < best:
            best, arg = r, int(i)
    return best, arg


def weighted_cheeger(X: PartiteComplex, budget: int = DEFAULT_BUDGET) -> Fraction:
    """min over nonempty proper S of w(E(S, S^c)) / min(w(S), w(S^c))."""
    S = CochainSpace(X, _Z2)
    n = X.n_vertices
    size = 2 ** (n - 1) - 1
    if size > budget:
        raise SearchSpaceTooLarge("vertex subsets", size, budget)
    (d0_, v_num), (d1_, e_num) = S.weights()[0], S.weights()[1]
    u, v = S.edges[:, 0], S.edges[:, 1]
    best = None
    # vertex n-1 stays outside S; covers every cut once
    for start in range(1, size + 1, 1 << 16):
        idx = np.arange(start, min(size + 1, start + (1 << 16)), dtype=np.int64)
        bits = _digits(idx, 2, n).astype(bool)
        cut = ((bits[:, u] != bits[:, v]) * e_num).sum(axis=1)
        ws = (bits * v_num).sum(axis=1)
        wc = v_num.sum() - ws
        small = np.minimum(ws, wc)
        # cut/d1 over small/d0, compared exactly by cross-multiplying
        r, _ = _exact_min(cut, small, d0_, d1_)
        if best is None or r < best:
            best = r
    return best


def h0_cb_exact(X: PartiteComplex, G: CoeffGroup, budget: int = DEFAULT_BUDGET) -> ExactResult:
    """h^0_cb from its definition: min over non-constant psi of
    ||d0 psi|| / min_g dist(psi, g).  Cross-checked against the weighted
    Cheeger constant when the group is nontrivial."""
    S = CochainSpace(X, G)
    n, q = X.n_vertices, G.order
    if q == 1:
        return ExactResult(None, None, 0, "definition (B0 = C0)")
    size = q ** n
    if size > budget:
        raise SearchSpaceTooLarge("0-cochains", size, budget)
    (d0_, v_num), (d1_, e_num) = S.weights()[0], S.weights()[1]
    u, v = S.edges[:, 0], S.edges[:, 1]
    best, arg = None, None
    for start in range(0, size, 1 << 15):
        idx = np.arange(start, min(size, start + (1 << 15)), dtype=np.int64)
        psi = _digits(idx, q, n)
        num = ((psi[:, u] != psi[:, v]) * e_num).sum(axis=1)
        # dist to the constant g is the weight off the level set of g
        den = np.min(np.stack([((psi != g) * v_num).sum(axis=1) for g in range(q)]), axis=0)
        r, i = _exact_min(num, den, d0_, d1_)
        if r is not None and (best is None or r < best):
            best, arg = r, tuple(int(x) for x in psi[i])
    ch = weighted_cheeger(X, budget=max(budget, 2 ** n))
    if ch != best:
        raise AssertionError(f"h0 {best} disagrees with the Cheeger constant {ch}")
    return ExactResult(best, arg, size, "definition, equal to weighted Cheeger")


def h1_cb_exhaustive(X: PartiteComplex, G: CoeffGroup, budget: int = DEFAULT_BUDGET,
                     chunk: int = 1 << 14) -> ExactResult:
    """h^1_cb = min over phi not in B1 of ||d1 phi|| / dist(phi, B1).

    B1 is enumerated as d0 psi with psi fixed to e at vertex 0: left
    multiplication of psi by a constant leaves d0 psi unchanged."""
    S = CochainSpace(X, G)
    if X.dim < 2:
        from .cochains import DimensionTooSmall
        raise DimensionTooSmall("h1 needs triangles")
    q, m, n = G.order, S.n_edges, X.n_vertices
    n_c1 = q ** m
    if n_c1 > budget:
        raise SearchSpaceTooLarge("1-cochains", n_c1, budget)
    n_c0 = q ** (n - 1)
    if n_c0 > budget:
        raise SearchSpaceTooLarge("0-cochains modulo constants", n_c0, budget)
    mul, inv, e = G.mul, G.inv, G.identity
    (d1w, e_num), (d2w, t_num) = S.weights()[1], S.weights()[2]
    u, v = S.edges[:, 0], S.edges[:, 1]
    psi = np.concatenate([np.full((n_c0, 1), e, dtype=np.int64),
                          _digits(np.arange(n_c0, dtype=np.int64), q, n - 1)], axis=1)
    B = mul[psi[:, u], inv[psi[:, v]]]                      # (n_c0, m)
    B = np.unique(B, axis=0)
    te = S.tri_edges
    best, arg = None, None
    for start in range(0, n_c1, chunk):
        idx = np.arange(start, min(n_c1, start + chunk), dtype=np.int64)
        phi = _digits(idx, q, m)
        d1v = mul[mul[phi[:, te[:, 0]], phi[:, te[:, 1]]], inv[phi[:, te[:, 2]]]]
        num = ((d1v != e) * t_num).sum(axis=1)
        dist = np.full(phi.shape[0], np.iinfo(np.int64).max)
        for b in B:
            dist = np.minimum(dist, ((phi != b) * e_num).sum(axis=1))
        r, i = _exact_min(num, dist, d1w, d2w)
        if r is not None and (best is None or r < best):
            best, arg = r, tuple(int(x) for x in phi[i])
    return ExactResult(best, arg, n_c1, f"exhaustive over {n_c1} 1-cochains and {len(B)} coboundaries")


_Z2 = CoeffGroup(np.array([[0, 1], [1, 0]]), name="Z2")
