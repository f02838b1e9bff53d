"""H^1(X, G) through homomorphisms pi_1(X) -> G.

A BFS spanning tree gives the presentation: one generator per non-tree edge,
one relator per triangle.  Homomorphisms are enumerated by backtracking, each
relator checked as soon as its last generator is assigned; H^1 is the set of
homomorphisms up to conjugation.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from ..complexes.core import PartiteComplex
from ..cones.search import Disconnected
from .coefficients import CoeffGroup


class BudgetExceeded(ValueError):
    def __init__(self, size: int, budget: int):
        super().__init__(f"{size} generator assignments exceed the budget {budget}")
        self.size = size
        self.budget = budget


@dataclass
class Pi1Report:
    trivial: bool
    n_homs: int
    n_classes: int
    rank: int
    n_relators: int

    def summary(self) -> str:
        word = "trivial" if self.trivial else "nontrivial"
        return f"{word} ({self.n_classes} classes)"


def presentation(X: PartiteComplex):
    """(generators as ordered edges, relators as lists of (gen, sign))."""
    if not X.is_connected():
        raise Disconnected("pi_1 needs a connected complex")
    adj = X.adjacency_sets()
    tree = set()
    seen = {0}
    dq = deque([0])
    while dq:
        x = dq.popleft()
        for y in sorted(adj[x]):
            if y not in seen:
                seen.add(y)
                tree.add((min(x, y), max(x, y)))
                dq.append(y)
    gens = [tuple(int(x) for x in e) for e in X.simplices(1) if tuple(int(x) for x in e) not in tree]
    gid = {e: i for i, e in enumerate(gens)}

    def letter(a, b):
        if (a, b) in gid:
            return [(gid[(a, b)], 1)]
        if (b, a) in gid:
            return [(gid[(b, a)], -1)]
        return []

    rels = []
    if X.dim >= 2:
        for a, b, c in X.simplices(2):
            a, b, c = int(a), int(b), int(c)
            w = letter(a, b) + letter(b, c) + letter(c, a)
            if w:
                rels.append(w)
    return gens, rels


def h1_triviality_pi1(X: PartiteComplex, G: CoeffGroup, budget: int = 10 ** 7) -> Pi1Report:
    gens, rels = presentation(X)
    r = len(gens)
    if G.order ** r > budget:
        raise BudgetExceeded(G.order ** r, budget)
    mul, inv, e = G.mul, G.inv, G.identity
    # relators grouped by the generator that completes them
    ready: dict[int, list] = {}
    for w in rels:
        ready.setdefault(max(g for g, _ in w), []).append(w)
    val = [0] * r
    homs = []

    def ok(i):
        for w in ready.get(i, ()):
            x = e
            for g, s in w:
                x = mul[x, val[g] if s > 0 else inv[val[g]]]
            if x != e:
                return False
        return True

    def rec(i):
        if i == r:
            homs.append(tuple(val))
            return
        for g in range(G.order):
            val[i] = g
            if ok(i):
                rec(i + 1)

    rec(0)
    classes = set()
    for h in homs:
        classes.add(min(tuple(int(mul[mul[g, x], inv[g]]) for x in h) for g in range(G.order)))
    return Pi1Report(len(classes) == 1, len(homs), len(classes), r, len(rels))
