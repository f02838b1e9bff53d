"""Small named complexes used as oracles and CLI inputs."""
from __future__ import annotations

import itertools

from .core import PartiteComplex


def complete_graph(m: int) -> PartiteComplex:
    return PartiteComplex(m, range(m), itertools.combinations(range(m), 2), name=f"K{m}")


def complete_bipartite(a: int, b: int) -> PartiteComplex:
    vt = [0] * a + [1] * b
    return PartiteComplex(2, vt, [(i, a + j) for i in range(a) for j in range(b)], name=f"K{a},{b}")


def octahedron() -> PartiteComplex:
    """K_{2,2,2}: opposite pairs {0,1}, {2,3}, {4,5} share a type."""
    tris = [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]
    return PartiteComplex(3, [0, 0, 1, 1, 2, 2], tris, name="K222")


def octahedron_symmetries() -> list[tuple]:
    """Generators of a subgroup of Aut(K_{2,2,2}) transitive on triangles."""
    return [(1, 0, 2, 3, 4, 5), (2, 3, 4, 5, 0, 1)]


def cycle(m: int) -> PartiteComplex:
    if m % 2:
        vt = list(range(m))
        n_types = m
    else:
        vt = [i % 2 for i in range(m)]
        n_types = 2
    return PartiteComplex(n_types, vt, [(i, (i + 1) % m) for i in range(m)], name=f"C{m}")


def hexagon() -> PartiteComplex:
    return cycle(6)


def torus7() -> PartiteComplex:
    """Seven-vertex triangulated torus (1-skeleton K_7)."""
    tris = set()
    for i in range(7):
        tris.add(tuple(sorted((i, (i + 1) % 7, (i + 3) % 7))))
        tris.add(tuple(sorted((i, (i + 2) % 7, (i + 3) % 7))))
    return PartiteComplex(7, range(7), sorted(tris), name="torus7")


def simplex(n: int) -> PartiteComplex:
    return PartiteComplex(n + 1, range(n + 1), [tuple(range(n + 1))], name=f"simplex{n}")


def triangle() -> PartiteComplex:
    return simplex(2)


def tetrahedron_boundary() -> PartiteComplex:
    return PartiteComplex(4, range(4), itertools.combinations(range(4), 3), name="dTet")


NAMED = {
    "K222": octahedron,
    "octahedron": octahedron,
    "torus7": torus7,
    "hexagon": hexagon,
    "triangle": triangle,
    "tetrahedron-boundary": tetrahedron_boundary,
}
