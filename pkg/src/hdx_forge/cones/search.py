"""Generic cone search: BFS paths plus greedy contraction of edge loops.

Used as a fallback and as an independent oracle for the hand-built cones.
Deterministic: ties are always broken by the smallest vertex id.
"""
from __future__ import annotations

from collections import deque

from ..complexes.core import PartiteComplex
from .certificate import ConeCertificate, ConeError
from .constructors import ScriptBuilder


class Disconnected(ConeError):
    pass


class BudgetExhausted(ConeError):
    def __init__(self, msg, partial=None, edge=None):
        super().__init__(msg)
        self.partial = partial
        self.edge = edge


def bfs_tree(adj, apex, allowed=None):
    """Shortest paths from apex inside the vertex set `allowed` (all if None).
    Parents are the smallest-id predecessor."""
    par = {apex: None}
    order = [apex]
    dq = deque([apex])
    while dq:
        x = dq.popleft()
        for y in sorted(adj[x]):
            if y in par or (allowed is not None and y not in allowed):
                continue
            par[y] = x
            order.append(y)
            dq.append(y)
    paths = {apex: (apex,)}
    for y in order[1:]:
        paths[y] = paths[par[y]] + (y,)
    return paths


def eccentricity(adj, v, allowed=None):
    dist = {v: 0}
    dq = deque([v])
    while dq:
        x = dq.popleft()
        for y in adj[x]:
            if y not in dist and (allowed is None or y in allowed):
                dist[y] = dist[x] + 1
                dq.append(y)
    return dist


def centre(adj, vertices):
    """Vertex of minimal eccentricity in the induced graph (smallest id on ties)."""
    vs = sorted(vertices)
    allowed = set(vs)
    best, best_e = None, None
    for v in vs:
        d = eccentricity(adj, v, allowed)
        if len(d) != len(vs):
            raise Disconnected(f"induced graph on {len(vs)} vertices is disconnected")
        e = max(d.values())
        if best_e is None or e < best_e:
            best, best_e = v, e
    return best


def bfs_zero_cone(adj, vertices, apex=None) -> ConeCertificate:
    """0-cone of the full subcomplex on `vertices` by a BFS tree from its centre."""
    vs = set(vertices)
    if not vs:
        raise ConeError("empty vertex set")
    if apex is None:
        apex = centre(adj, vs)
    paths = bfs_tree(adj, apex, vs)
    if len(paths) != len(vs):
        raise Disconnected("vertex set is not connected")
    return ConeCertificate(apex, paths, 0)


def _contract(sb: ScriptBuilder, depth, adj, tris, cap):
    steps = 0
    loop = sb.loop
    while len(loop) > 1:
        steps += 1
        if steps > cap:
            return False
        p = next((i for i in range(len(loop) - 2) if loop[i] == loop[i + 2]), None)
        if p is not None:
            sb.bt_remove(p)
            continue
        best = None
        for i in range(len(loop) - 2):
            a, b, c = loop[i], loop[i + 1], loop[i + 2]
            if tuple(sorted((a, b, c))) in tris:
                if best is None or depth[b] > depth[loop[best + 1]]:
                    best = i
        if best is not None:
            sb.tr_remove(best)
            continue
        # lower the deepest interior vertex through two triangles
        inner = sorted(range(1, len(loop) - 1), key=lambda i: (-depth[loop[i]], i))
        moved = False
        for i in inner:
            a, b, c = loop[i - 1], loop[i], loop[i + 1]
            cands = sorted((y for y in adj[a] & adj[b] & adj[c] if depth[y] < depth[b]),
                           key=lambda y: (depth[y], y))
            for y in cands:
                if tuple(sorted((a, y, b))) in tris and tuple(sorted((y, b, c))) in tris:
                    sb.tr_insert(i - 1, y)
                    sb.tr_remove(i)
                    moved = True
                    break
            if moved:
                break
        if not moved:
            return False
    return True


def generic_cone_search(X: PartiteComplex, kind: int = 1, apex=None, step_cap: int | None = None):
    """BFS paths from the apex (default: a centre of the 1-skeleton) and, for
    kind 1, a greedy contraction script per edge.  Raises BudgetExhausted with
    the 0-cone attached when some edge loop cannot be contracted."""
    adj = X.adjacency_sets()
    if X.n_vertices == 0:
        raise Disconnected("empty complex")
    if not X.is_connected():
        raise Disconnected("complex is disconnected")
    C0 = bfs_zero_cone(adj, range(X.n_vertices), apex)
    if kind == 0:
        return C0
    C = ConeCertificate(C0.apex, C0.paths, 1, name="search")
    depth = {u: len(P) - 1 for u, P in C.paths.items()}
    tris = X.simplex_set(2) if X.dim >= 2 else set()
    r0 = C.rad0()
    cap = step_cap if step_cap is not None else max(1, len(tris)) * max(1, r0) ** 2
    for e in sorted(X.simplex_set(1)):
        u, v = e
        sb = ScriptBuilder(C, C.edge_start(u, v))
        if not _contract(sb, depth, adj, tris, cap):
            raise BudgetExhausted(f"no contraction found for edge {e} within {cap} steps",
                                  partial=C0, edge=e)
        C.set_script(u, v, sb.steps)
    return C
