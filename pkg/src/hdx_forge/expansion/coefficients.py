"""Finite coefficient groups as multiplication tables."""
from __future__ import annotations

import itertools
import re
from pathlib import Path

import numpy as np


class GroupAxiomError(ValueError):
    pass


class CoeffGroup:
    """Elements are 0..order-1; `mul[a, b]` is the product ab."""

    full_check_limit = 64

    def __init__(self, mul, labels=None, name: str = "", sample_seed: int = 0):
        self.mul = np.asarray(mul, dtype=np.int64)
        n = self.mul.shape[0]
        if self.mul.shape != (n, n) or n == 0:
            raise GroupAxiomError("multiplication table must be a nonempty square")
        self.name = name or f"G{n}"
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        if self.mul.min() < 0 or self.mul.max() >= n:
            raise GroupAxiomError("table entries out of range")
        ids = [e for e in range(n) if (self.mul[e] == np.arange(n)).all()
               and (self.mul[:, e] == np.arange(n)).all()]
        if not ids:
            raise GroupAxiomError("no identity element")
        self.identity = ids[0]
        inv = np.full(n, -1, dtype=np.int64)
        for a in range(n):
            hits = np.nonzero(self.mul[a] == self.identity)[0]
            if hits.size != 1 or self.mul[hits[0], a] != self.identity:
                raise GroupAxiomError(f"element {self.labels[a]} has no two-sided inverse")
            inv[a] = hits[0]
        self.inv = inv
        for row in self.mul:
            if np.unique(row).size != n:
                raise GroupAxiomError("table is not a Latin square")
        self._check_associative(sample_seed)
        self._orders = None

    def _check_associative(self, seed):
        n = self.order
        m = self.mul
        if n <= self.full_check_limit:
            lhs = m[m[:, :, None], np.arange(n)[None, None, :]]      # (ab)c
            rhs = m[np.arange(n)[:, None, None], m[None, :, :]]      # a(bc)
            if not (lhs == rhs).all():
                raise GroupAxiomError("multiplication is not associative")
            return
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, 20000))
        if not (m[m[a, b], c] == m[a, m[b, c]]).all():
            raise GroupAxiomError("multiplication is not associative (sampled)")

    @property
    def order(self) -> int:
        return int(self.mul.shape[0])

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"CoeffGroup({self.name}, order {self.order})"

    def product(self, *xs) -> int:
        out = self.identity
        for x in xs:
            out = int(self.mul[out, x])
        return out

    def is_abelian(self) -> bool:
        return bool((self.mul == self.mul.T).all())

    def element_orders(self) -> dict:
        if self._orders is None:
            out = {}
            for a in range(self.order):
                k, x = 1, a
                while x != self.identity:
                    x = int(self.mul[x, a])
                    k += 1
                out[a] = k
            self._orders = out
        return dict(self._orders)

    def has_element_of_order(self, p: int) -> bool:
        return p in self.element_orders().values()

    def no_element_of_order(self, p: int) -> bool:
        return not self.has_element_of_order(p)

    def conjugate(self, g: int, x):
        """g x g^-1, elementwise on arrays."""
        return self.mul[self.mul[g, x], self.inv[g]]


def cyclic(n: int) -> CoeffGroup:
    a = np.arange(n)
    return CoeffGroup((a[:, None] + a[None, :]) % n, labels=[str(i) for i in range(n)], name=f"Z{n}")


def from_permutations(perms, name: str = "") -> CoeffGroup:
    """Group given by an explicit, closed list of permutations (tuples)."""
    perms = [tuple(p) for p in perms]
    idx = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    mul = np.empty((n, n), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            # (pq)(x) = p(q(x)): apply q first
            r = tuple(p[x] for x in q)
            if r not in idx:
                raise GroupAxiomError("permutation list is not closed")
            mul[i, j] = idx[r]
    return CoeffGroup(mul, labels=["".join(map(str, p)) for p in perms], name=name)


def symmetric(k: int) -> CoeffGroup:
    if not 1 <= k <= 5:
        raise ValueError("built-in symmetric groups go up to S5")
    return from_permutations(sorted(itertools.permutations(range(k))), name=f"S{k}")


def load_table(path) -> CoeffGroup:
    """Whitespace-separated square table, one row per line; '#' starts a comment.
    An optional first line `labels: a b c ...` names the elements."""
    labels = None
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("labels:"):
            labels = line[len("labels:"):].split()
            continue
        rows.append([int(x) for x in line.split()])
    return CoeffGroup(rows, labels=labels, name=Path(path).stem)


def parse_group(spec: str) -> CoeffGroup:
    """'Z2', 'Z/3', 'C5', 'S3', or 'table:<path>'."""
    s = spec.strip()
    if s.startswith("table:"):
        return load_table(s[len("table:"):])
    m = re.fullmatch(r"(?:Z/?|C)(\d+)", s)
    if m:
        return cyclic(int(m.group(1)))
    m = re.fullmatch(r"S(\d+)", s)
    if m:
        return symmetric(int(m.group(1)))
    raise ValueError(f"unknown coefficient group {spec!r}")

