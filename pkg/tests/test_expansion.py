import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hdx_forge.complexes import PartiteComplex
from hdx_forge.complexes.small import (complete_bipartite, complete_graph, hexagon, octahedron,
                                       octahedron_symmetries, simplex, tetrahedron_boundary,
                                       torus7, triangle)
from hdx_forge.cones import generic_cone_search, validate_cone
from hdx_forge.expansion import (CochainSpace, DimensionTooSmall, GroupAxiomError, InvalidCone,
                                 NoSymmetryWitness, NotACocycle, NotAntisymmetric, SearchSpaceTooLarge,
                                 SymmetryWitness, action, contract_cocycle, cosystolic_bound, cyclic,
                                 d0, d1, d1_ordered, dist, h0_cb_exact, h1_cb_exhaustive,
                                 h1_lower_bound_from_cone, h1_triviality_pi1, is_cocycle, is_vacuous,
                                 radius_h1_bound, local_spectral_report, parse_group, random_walk_lambda2,
                                 symmetric, trickling_down, weighted_cheeger)
from hdx_forge.expansion.cochains import Cochain0
from hdx_forge.pipelines import build_opposite
from oracles import cheeger_oracle, h1_oracle

GROUPS = {"Z2": cyclic(2), "Z3": cyclic(3), "S3": symmetric(3)}
COMPLEXES = {"triangle": triangle, "K222": octahedron, "dTet": tetrahedron_boundary,
             "torus7": torus7, "simplex3": lambda: simplex(3)}


# ---------------------------------------------------------------- coefficient groups

def test_group_tables():
    S3 = symmetric(3)
    assert S3.order == 6 and not S3.is_abelian()
    assert sorted(S3.element_orders().values()) == [1, 2, 2, 2, 3, 3]
    assert S3.no_element_of_order(5) and S3.has_element_of_order(3)
    assert symmetric(5).order == 120
    assert parse_group("Z/3").order == 3 and parse_group("C5").is_abelian()
    with pytest.raises(GroupAxiomError):
        from hdx_forge.expansion import CoeffGroup
        CoeffGroup([[0, 1], [1, 1]])
    with pytest.raises(GroupAxiomError):
        from hdx_forge.expansion import CoeffGroup
        # a Latin square with identity 0 that is not associative
        CoeffGroup([[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]])


def test_load_table(tmp_path):
    p = tmp_path / "v4.txt"
    p.write_text("labels: e a b c\n0 1 2 3\n1 0 3 2\n2 3 0 1\n3 2 1 0  # Klein\n")
    G = parse_group(f"table:{p}")
    assert G.order == 4 and G.is_abelian() and G.labels[1] == "a"
    assert G.no_element_of_order(4)


# ---------------------------------------------------------------- cochains

@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(COMPLEXES)), st.sampled_from(sorted(GROUPS)), st.integers(0, 2 ** 32 - 1))
def test_d1_of_d0_is_trivial(cname, gname, seed):
    S = CochainSpace(COMPLEXES[cname](), GROUPS[gname])
    psi = S.random0(np.random.default_rng(seed))
    phi = d0(psi)
    assert d1(phi).trivial() and is_cocycle(phi)
    for t in S.tris[:5]:
        a, b, c = (int(x) for x in t)
        for p in itertools.permutations((a, b, c)):
            assert d1_ordered(phi, *p) == S.G.identity


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(COMPLEXES)), st.sampled_from(sorted(GROUPS)), st.integers(0, 2 ** 32 - 1))
def test_antisymmetry_and_norms(cname, gname, seed):
    rng = np.random.default_rng(seed)
    S = CochainSpace(COMPLEXES[cname](), GROUPS[gname])
    G = S.G
    psi, chi = S.random0(rng), S.random0(rng)
    phi = d0(chi)
    for f in (phi, action(psi, phi)):
        for (u, v), g in f.ordered_items():
            assert f(v, u) == G.inv[g]
    r = S.random1(rng)
    for c in (psi, r, d1(r)):
        assert 0 <= c.norm() <= 1
    assert S.trivial1().norm() == 0
    # dist: identity, symmetry, triangle inequality
    a, b, c = S.random1(rng), S.random1(rng), S.random1(rng)
    assert dist(a, a) == 0
    assert dist(a, b) == dist(b, a)
    assert dist(a, c) <= dist(a, b) + dist(b, c)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(GROUPS)), st.integers(0, 2 ** 32 - 1))
def test_action_laws(gname, seed):
    rng = np.random.default_rng(seed)
    S = CochainSpace(octahedron(), GROUPS[gname])
    G = S.G
    p1, p2, chi = S.random0(rng), S.random0(rng), S.random0(rng)
    phi = d0(chi)
    assert action(S.constant0(G.identity), phi) == phi
    assert action(p1 * p2, phi) == action(p1, action(p2, phi))
    assert action(chi.inverse(), phi) == S.trivial1()


def test_constant_and_edge_examples():
    S = CochainSpace(octahedron(), symmetric(3))
    assert d0(S.constant0(4)) == S.trivial1()
    vals = np.zeros(S.nv, dtype=np.int64)
    vals[0] = 3
    assert d1(d0(Cochain0(S, vals))).norm() == 0
    with pytest.raises(NotACocycle):
        bad = S.trivial1()
        bad.values[0] = 1
        action(S.constant0(0), bad)
    with pytest.raises(NotAntisymmetric):
        S.cochain1_from_ordered({(0, 2): 3, (2, 0): 3, **{tuple(map(int, e)): 0 for e in S.edges[1:]}})
    with pytest.raises(DimensionTooSmall):
        d1(d0(CochainSpace(hexagon(), cyclic(2)).constant0(0)))


def test_weights_sum_to_one():
    for f in COMPLEXES.values():
        S = CochainSpace(f(), cyclic(2))
        for k, (den, num) in S.weights().items():
            assert Fraction(int(num.sum()), den) == 1


# ---------------------------------------------------------------- spectral

@pytest.mark.parametrize("m", [2, 3, 5, 8])
def test_complete_graph_spectrum(m):
    assert random_walk_lambda2(complete_graph(m)).lambda2 == pytest.approx(-1 / (m - 1), abs=1e-10)


@pytest.mark.parametrize("a,b", [(1, 3), (2, 2), (3, 5)])
def test_complete_bipartite_spectrum(a, b):
    assert random_walk_lambda2(complete_bipartite(a, b)).lambda2 == pytest.approx(0, abs=1e-10)


def test_octahedron_spectrum():
    rep = random_walk_lambda2(octahedron(), keep_spectrum=True)
    assert rep.lambda2 == pytest.approx(0, abs=1e-10)
    assert np.allclose(rep.spectrum, [1, 0, 0, 0, -0.5, -0.5])
    assert rep.residual <= 1e-10


@pytest.mark.parametrize("recipe", [("group", "A", 2, 3), ("group", "A", 2, 5), ("opp", "A", 3, 3)])
def test_dense_and_power_agree(recipe):
    X = build_opposite(*recipe).X
    a = random_walk_lambda2(X, method="dense").lambda2
    b = random_walk_lambda2(X, method="power")
    assert abs(a - b.lambda2) < 1e-6
    assert b.residual < 1e-4
    # deterministic seed
    assert random_walk_lambda2(X, method="power").lambda2 == b.lambda2


def test_link_of_congruence_vertex():
    # the vertex links of the q = 3, rank-2 congruence complex are the A_2/F_3 opposite complex
    X = build_opposite("group", "A", 2, 3).X
    lam = random_walk_lambda2(X).lambda2
    assert lam == pytest.approx(1 / math.sqrt(3), abs=1e-9)
    assert lam < 1 / (math.sqrt(3) - 1)


def test_local_report_on_simplex():
    rep = local_spectral_report(simplex(3), target=0.0)
    assert rep.passed and rep.worst <= 0
    per = local_spectral_report(simplex(3), target=0.0, per_type=True)
    assert [r.lambda2 for r in per.rows] == pytest.approx([r.lambda2 for r in rep.rows])


def test_trickling_down():
    assert trickling_down(0.25)["bound"] == pytest.approx(1 / 3)
    assert not trickling_down(0.25)["vacuous"]
    assert trickling_down(0.6)["vacuous"]


# ---------------------------------------------------------------- exact constants

@pytest.mark.parametrize("cname", ["K222", "dTet"])
@pytest.mark.parametrize("gname", ["Z2", "Z3"])
def test_h1_matches_oracle(cname, gname):
    X, G = COMPLEXES[cname](), GROUPS[gname]
    res = h1_cb_exhaustive(X, G)
    assert isinstance(res.value, Fraction)
    assert res.value == h1_oracle(X, G)


def test_h1_on_triangle():
    res = h1_cb_exhaustive(triangle(), cyclic(2))
    # on a single triangle every cocycle is a coboundary, so non-coboundaries have d1 != e
    assert res.value is not None and res.value > 0
    assert res.enumerated == 8


def test_h1_budget():
    with pytest.raises(SearchSpaceTooLarge) as ei:
        h1_cb_exhaustive(octahedron(), symmetric(3))
    assert ei.value.size == 6 ** 12


@pytest.mark.parametrize("cname", ["K222", "dTet", "triangle"])
def test_h0_and_cheeger(cname):
    X = COMPLEXES[cname]()
    assert weighted_cheeger(X) == cheeger_oracle(X)
    assert h0_cb_exact(X, cyclic(2)).value == cheeger_oracle(X)


# ---------------------------------------------------------------- bounds

def test_lemma_arithmetic():
    assert radius_h1_bound(2, 4) == Fraction(1, 4)
    assert radius_h1_bound(3, 1) == Fraction(1, 4)


def test_cone_bound_below_exact_h1():
    X = octahedron()
    C = generic_cone_search(X)
    wit = SymmetryWitness("automorphisms", tuple(octahedron_symmetries()))
    b = h1_lower_bound_from_cone(X, C, wit)
    assert b.certified
    assert b.value == Fraction(1, validate_cone(X, C).rad1)
    for G in (cyclic(2), cyclic(3)):
        assert b.value <= h1_cb_exhaustive(X, G).value
    with pytest.raises(NoSymmetryWitness):
        h1_lower_bound_from_cone(X, C, None)
    assumed = h1_lower_bound_from_cone(X, C, SymmetryWitness("assumed"))
    assert not assumed.certified


def test_cosystolic_arithmetic():
    assert cosystolic_bound(0, 24) == 1
    v = cosystolic_bound(0.1, 1)
    assert v == pytest.approx(0.9 / 24 - 0.1 * math.e) and v == pytest.approx(-0.2343, abs=1e-4)
    assert is_vacuous(v)
    v = cosystolic_bound(1e-6, Fraction(1, 29502))
    assert v < 0 and is_vacuous(v)


# ---------------------------------------------------------------- contraction and pi_1

@pytest.mark.parametrize("gname", sorted(GROUPS))
def test_contract_coboundaries(gname):
    X = octahedron()
    C = generic_cone_search(X)
    S = CochainSpace(X, GROUPS[gname])
    rng = np.random.default_rng(7)
    for _ in range(10):
        phi = d0(S.random0(rng))
        psi = contract_cocycle(X, C, phi, replay=True)
        assert action(psi, phi) == S.trivial1()


def test_contract_rejects():
    X = octahedron()
    C = generic_cone_search(X)
    S = CochainSpace(X, cyclic(3))
    bad = S.trivial1()
    bad.values[0] = 1
    with pytest.raises(NotACocycle):
        contract_cocycle(X, C, bad)
    C0 = generic_cone_search(X, kind=0)
    with pytest.raises(InvalidCone):
        contract_cocycle(X, C0, S.trivial1())


def test_pi1_examples():
    r = h1_triviality_pi1(octahedron(), cyclic(2))
    assert r.trivial
    r = h1_triviality_pi1(torus7(), cyclic(2))
    assert (r.n_homs, r.n_classes, r.trivial) == (4, 4, False)
    r = h1_triviality_pi1(hexagon(), cyclic(3))
    assert (r.n_homs, r.trivial) == (3, False)
    # S3 on a simply connected complex: only the trivial homomorphism
    assert h1_triviality_pi1(tetrahedron_boundary(), symmetric(3)).n_homs == 1
