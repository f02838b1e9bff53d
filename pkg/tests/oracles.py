"""Brute-force oracles written without the package's cochain machinery.

Weights come straight from facet counts, the search order differs from the
vectorised enumerators, and h1 uses a gauge-fixed orbit search instead of
scanning every 1-cochain."""
import itertools
import math
from fractions import Fraction


def weights(X):
    """w(sigma) = #facets through sigma / (C(d+1, k+1) #facets)."""
    top = [tuple(sorted(int(x) for x in f)) for f in X.top_faces()]
    d = len(top[0]) - 1
    out = {}
    for k in range(min(d, 2) + 1):
        cnt = {}
        for f in top:
            for s in itertools.combinations(f, k + 1):
                cnt[s] = cnt.get(s, 0) + 1
        den = math.comb(d + 1, k + 1) * len(top)
        out[k] = {s: Fraction(c, den) for s, c in cnt.items()}
    return out


def _scaled(w):
    """Integer weights over a common denominator."""
    den = math.lcm(*(x.denominator for x in w.values()))
    return {s: int(x * den) for s, x in w.items()}, den


def h1_oracle(X, G):
    """min over phi outside B1 of ||d1 phi|| / dist(phi, B1).

    psi . phi keeps both the coboundary norm and the distance to B1, so phi
    can be taken trivial on a BFS spanning tree rooted at the last vertex."""
    w = weights(X)
    w1, den1 = _scaled(w[1])
    w2, den2 = _scaled(w[2])
    edges = sorted(w1)
    tris = sorted(w2)
    verts = sorted(v for (v,) in w[0])
    mul, inv, e = G.mul.tolist(), G.inv.tolist(), G.identity
    tree, seen, frontier = set(), {verts[-1]}, [verts[-1]]
    while frontier:
        x = frontier.pop(0)
        for a, b in edges:
            y = b if a == x else a if b == x else None
            if y is not None and y not in seen:
                seen.add(y)
                tree.add((a, b))
                frontier.append(y)
    free = [ed for ed in reversed(edges) if ed not in tree]
    cob = set()
    for vals in itertools.product(range(G.order), repeat=len(verts)):
        psi = dict(zip(verts, vals))
        cob.add(tuple(mul[psi[a]][inv[psi[b]]] for a, b in edges))
    ew = [w1[ed] for ed in edges]
    best = None
    for vals in itertools.product(range(G.order), repeat=len(free)):
        phi = {ed: e for ed in edges}
        phi.update(zip(free, vals))
        num = sum(w2[t] for t in tris
                  if mul[mul[phi[(t[0], t[1])]][phi[(t[1], t[2])]]][inv[phi[(t[0], t[2])]]] != e)
        vec = [phi[ed] for ed in edges]
        dist = min(sum(x for x, a, b in zip(ew, vec, c) if a != b) for c in cob)
        if dist > 0:
            r = Fraction(num * den1, dist * den2)
            best = r if best is None else min(best, r)
    return best


def cheeger_oracle(X):
    w = weights(X)
    verts = sorted(v for (v,) in w[0])
    best = None
    for r in range(1, len(verts)):
        for A in itertools.combinations(verts, r):
            A = set(A)
            cut = sum((x for (a, b), x in w[1].items() if (a in A) != (b in A)), Fraction(0))
            wa = sum(w[0][(v,)] for v in A)
            val = cut / min(wa, 1 - wa)
            best = val if best is None else min(best, val)
    return best
