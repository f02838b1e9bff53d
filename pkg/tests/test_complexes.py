import itertools
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hdx_forge.algebra import RingMatrix, elementary_matrix, make_field
from hdx_forge.complexes import (EmptyFactor, FormatError, NotPartite, NotPure, PartiteComplex,
                                 SimplexNotInComplex, coset_complex, export_string, import_string,
                                 join, typed_isomorphic, vertex_link_profile, weight)
from hdx_forge.complexes.small import (complete_bipartite, cycle, octahedron, simplex,
                                       tetrahedron_boundary, torus7, triangle)
from hdx_forge.groups import GenSet, generate_group, subgroup_intersection

F3 = make_field(3)
F7 = make_field(7)


def scalar_group(a):
    return generate_group(GenSet(1, F7, (RingMatrix(1, (a,), F7),), ("x",)))


def heisenberg_parts():
    def g(pairs):
        mats = tuple(elementary_matrix(2, i, j, 1, F3) for i, j in pairs)
        return generate_group(GenSet(3, F3, mats, tuple(map(str, pairs))))
    return g([(1, 2), (2, 3)]), g([(1, 2)]), g([(2, 3)])


def point(label="p"):
    return PartiteComplex(1, [0], [(0,)], labels=[label])


def downward_closed(X):
    for k in range(1, X.dim + 1):
        faces = X.simplex_set(k)
        for f in faces:
            for sub in itertools.combinations(f, k):
                if sub not in X.simplex_set(k - 1):
                    return False
    return True


# ---------------------------------------------------------------- coset complexes

def test_cyclic_coset_complex_is_k23():
    G = scalar_group(3)
    X = coset_complex(G, [scalar_group(2), scalar_group(6)])
    assert X.f_vector() == [5, 6]
    assert typed_isomorphic(X, complete_bipartite(2, 3)) is not None


def test_heisenberg_coset_complex():
    U, H1, H2 = heisenberg_parts()
    X = coset_complex(U, [H1, H2])
    assert X.f_vector() == [18, 27]
    deg = np.bincount(X.simplices(1).ravel())
    assert (deg == 3).all()
    assert X.n_facets() == U.order // subgroup_intersection(H1, H2).order


def test_coset_complex_link_matches_subgroup_model():
    # the link of the vertex H_0 is CC(H_0; H_0 n H_1, H_0 n H_2)
    from hdx_forge.pipelines import build, link_model
    b = build("cong-A2-F2-t^2+t+1")
    X = b.X
    for t in range(3):
        v = int(X.vertices_of_type(t)[0])
        L = X.link((v,)).compact_types()
        assert typed_isomorphic(L, link_model(b, t)) is not None


# ---------------------------------------------------------------- links and joins

def test_link_examples():
    X = octahedron()
    assert X.link(()).f_vector() == X.f_vector()
    L = X.link((0,)).compact_types()
    assert typed_isomorphic(L, cycle(4)) is not None
    with pytest.raises(SimplexNotInComplex):
        X.link((0, 1))


def test_join_examples():
    e = join(point("a"), point("b"))
    assert e.f_vector() == [2, 1]
    two = PartiteComplex(1, [0, 0], [(0,), (1,)])
    sq = join(two, two)
    assert typed_isomorphic(sq, cycle(4)) is not None
    boundary = cycle(3)
    cone = join(boundary, point())
    assert cone.f_vector() == [4, 6, 3] and cone.dim == boundary.dim + 1
    with pytest.raises(EmptyFactor):
        join(PartiteComplex(1, [], []), point())


@pytest.mark.parametrize("a,b,c", [
    (point(), cycle(4), triangle()),
    (complete_bipartite(1, 2), point(), cycle(4)),
    (triangle(), point(), point()),
])
def test_join_is_associative(a, b, c):
    assert typed_isomorphic(join(join(a, b), c), join(a, join(b, c))) is not None


# ---------------------------------------------------------------- weights

def test_weight_single_simplex():
    for n in range(4):
        w = weight(simplex(n))
        for k in range(n + 1):
            assert set(w.dict(k).values()) == {Fraction(1, comb(n + 1, k + 1))}


def test_weight_octahedron():
    w = weight(octahedron())
    assert set(w.dict(2).values()) == {Fraction(1, 8)}
    assert set(w.dict(1).values()) == {Fraction(1, 12)}


def test_weight_constant_on_type_classes_in_coset_complex():
    from hdx_forge.pipelines import build
    X = build("group-A3-F3").X
    w = weight(X)
    for k in range(X.dim + 1):
        rows, cnt = w.counts(k)
        types = [tuple(r) for r in X.vtype[rows]]
        for t in set(types):
            assert len({c for c, tt in zip(cnt, types) if tt == t}) == 1


def test_weight_needs_pure():
    X = PartiteComplex(3, [0, 1, 2, 0], [(0, 1, 2), (3,)])
    with pytest.raises(NotPure):
        weight(X)


@st.composite
def pure_partite(draw):
    n_types = draw(st.integers(1, 4))
    per_type = draw(st.lists(st.integers(1, 3), min_size=n_types, max_size=n_types))
    offsets = np.cumsum([0] + per_type)
    vtype = [t for t, c in enumerate(per_type) for _ in range(c)]
    choices = [list(range(offsets[t], offsets[t + 1])) for t in range(n_types)]
    all_facets = list(itertools.product(*choices))
    facets = draw(st.lists(st.sampled_from(all_facets), min_size=1, max_size=12, unique=True))
    used = sorted({v for f in facets for v in f})
    relabel = {v: i for i, v in enumerate(used)}
    return PartiteComplex(n_types, [vtype[v] for v in used],
                          [tuple(relabel[v] for v in f) for f in facets])


@settings(max_examples=60, deadline=None)
@given(pure_partite())
def test_weights_sum_to_one_and_closure(X):
    w = weight(X)
    for k in range(-1, X.dim + 1):
        assert w.total(k) == 1
    assert downward_closed(X)
    X.check_partite()


@settings(max_examples=40, deadline=None)
@given(pure_partite())
def test_export_roundtrip_bit_exact(X):
    s = export_string(X)
    Y = import_string(s)
    assert export_string(Y) == s
    assert Y.canonical_hash() == X.canonical_hash()


def test_import_rejects_bad_counts():
    s = export_string(octahedron()).replace("counts 6 12 8", "counts 6 12 9")
    with pytest.raises(FormatError):
        import_string(s)


def test_not_partite():
    with pytest.raises(NotPartite):
        PartiteComplex(2, [0, 0, 1], [(0, 1, 2)])


# ---------------------------------------------------------------- misc queries

def test_connectivity_and_profile():
    assert octahedron().is_connected()
    two = PartiteComplex(2, [0, 1, 0, 1], [(0, 1), (2, 3)])
    assert not two.is_connected()
    prof = vertex_link_profile(octahedron())
    assert (prof == [4, 4, 2, 2]).all()
    prof = vertex_link_profile(torus7())
    assert (prof == [6, 6, 2, 2]).all()


def test_small_named_complexes():
    assert tetrahedron_boundary().f_vector() == [4, 6, 4]
    assert torus7().f_vector() == [7, 21, 14]
    assert octahedron().f_vector() == [6, 12, 8]
