import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hdx_forge.algebra import make_field
from hdx_forge.complexes import (FormSpace, PartiteComplex, VectorSpace, isotropic_flag_complex,
                                 oriflamme_complex, standard_flag, transversal_complex_A)
from hdx_forge.cones import (BrokenPath, BudgetExhausted, ConeCertificate, Disconnected,
                             DimensionTooSmall, EmptyFactor, EmptyY, Filtration, IllegalStep,
                             InvalidInputCone, Layer, MissingEdgeScript, NonTrivialTerminal,
                             PreconditionViolated, ProviderContractViolated, Script, budget_A,
                             budget_C, cone_add_vertices, cone_join_basic, cone_join_from_zero,
                             cone_join_general, cone_star, edge_map_case, export_cone_string,
                             generic_cone_search, import_cone_string, induction_engine,
                             provider_A, provider_C, provider_D, radius_budget, script_tr_counts,
                             star_cone_in, subdivision_transfer, validate_cone)
from hdx_forge.expansion import radius_h1_bound
from hdx_forge.pipelines import build_opposite


def simplex(n):
    return PartiteComplex(n + 1, list(range(n + 1)), [tuple(range(n + 1))])


def point():
    return PartiteComplex(1, [0], [(0,)])


def edge():
    return PartiteComplex(2, [0, 1], [(0, 1)])


def path2():
    return PartiteComplex(2, [0, 1, 0], [(0, 1), (1, 2)])


def discrete(k):
    return PartiteComplex(1, [0] * k, [(i,) for i in range(k)])


def octahedron():
    return PartiteComplex(3, [0, 0, 1, 1, 2, 2],
                          [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)])


def hexagon():
    return PartiteComplex(2, [0, 1] * 3, [(i, (i + 1) % 6) for i in range(6)])


def quiet():
    warnings.simplefilter("ignore")


# ---------------------------------------------------------------- checker

@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("apex_pos", [0, -1])
def test_star_cone_on_simplex(n, apex_pos):
    X = simplex(n)
    w = list(range(n + 1))[apex_pos]
    C = star_cone_in(X, w, [u for u in range(n + 1) if u != w])
    rep = validate_cone(X, C)
    assert rep.valid and (rep.rad0, rep.rad1) == (1, 1)


def test_tr_through_non_triangle_is_rejected():
    # square 0-1-2-3 filled only by triangle (0,1,2)
    X = PartiteComplex(3, [0, 1, 2, 1], [(0, 1, 2), (0, 2, 3)])
    C = star_cone_in(X, 0, [1, 2, 3])
    C.set_script(1, 3, [("TR", 0, 0, 1, 3)])
    with pytest.raises(IllegalStep) as ei:
        validate_cone(X, C)
    assert ei.value.key == (1, 3) or "(1,3)" in str(ei.value)


def test_checker_defects():
    X = simplex(2)
    C = star_cone_in(X, 0, [1, 2])
    bad = C.copy()
    bad.paths = dict(C.paths)
    bad.paths[2] = (0, 1, 0, 2)[:2]
    with pytest.raises(BrokenPath):
        validate_cone(X, bad)
    bad = C.copy()
    del bad.scripts[next(iter(bad.scripts))]
    with pytest.raises(MissingEdgeScript):
        validate_cone(X, bad)
    bad = C.copy()
    bad.scripts = dict(C.scripts)
    bad.scripts[(1, 2)] = Script([])
    with pytest.raises(NonTrivialTerminal):
        validate_cone(X, bad)
    bad.scripts[(1, 2)] = Script([("BT", 0)])
    with pytest.raises(IllegalStep):
        validate_cone(X, bad)


def test_rad1_counts_only_triangle_moves():
    X = simplex(2)
    C = ConeCertificate(0, {0: (0,), 1: (0, 1), 2: (0, 2)}, 1)
    C.set_script(0, 1, [("BT", 0)])
    C.set_script(0, 2, [("BT", 0)])
    # insert a backtrack then remove it again: BT moves cost nothing
    C.set_script(1, 2, [("BT+", 1, 0), ("BT", 1), ("TR", 0, 0, 1, 2), ("BT", 0)])
    rep = validate_cone(X, C)
    assert rep.rad1 == 1


def test_cone_file_round_trip(tmp_path):
    S = transversal_complex_A(VectorSpace(make_field(3), 4), standard_flag(VectorSpace(make_field(3), 4)))
    C, _ = induction_engine(provider_A(S))
    h = S.X.canonical_hash()
    text = export_cone_string(C, h)
    C2, h2 = import_cone_string(text)
    assert h2 == h
    assert export_cone_string(C2, h) == text
    assert validate_cone(S.X, C2) == validate_cone(S.X, C)


# ---------------------------------------------------------------- constructors

def test_cone_star_on_edge():
    r = cone_star("w", edge())
    rep = validate_cone(r.complex, r.cone)
    assert (rep.rad0, rep.rad1) == (1, 1)
    assert r.complex.label(0) == "w"


def test_cone_star_without_edges():
    r = cone_star("w", discrete(2))
    rep = validate_cone(r.complex, r.cone)
    assert rep.rad0 <= 1 and rep.rad1 <= 1


def test_cone_star_on_point_is_an_edge():
    r = cone_star("w", point())
    assert r.complex.f_vector() == [2, 1]
    assert validate_cone(r.complex, r.cone).rad0 == 1


def test_cone_star_empty():
    with pytest.raises(EmptyY):
        cone_star("w", PartiteComplex(1, [], []))


def test_cone_join_basic():
    rep = validate_cone(*_pair(cone_join_basic(point(), point())))
    assert rep.rad0 == 1
    rep = validate_cone(*_pair(cone_join_basic(discrete(3), discrete(3))))
    assert rep.rad0 == 2
    with pytest.raises(EmptyFactor):
        cone_join_basic(point(), PartiteComplex(1, [], []))


def _pair(r):
    return r.complex, r.cone


def test_cone_join_from_zero_tr_counts():
    c0 = ConeCertificate(0, {0: (0,), 1: (0, 1), 2: (0, 1, 2)}, 0)
    r = cone_join_from_zero(path2(), c0, point())
    rep = validate_cone(r.complex, r.cone)
    assert rep.rad0 == 2 and rep.rad1 <= 2 * 2 + 1
    P = r.cone.paths
    L = lambda u: len(P[u]) - 1
    counts = script_tr_counts(r.complex, r.cone)
    for (u, v), c in counts.items():
        if u in r.left and v in r.left:
            assert c == L(u) + L(v) + 1
        elif u in r.left:
            assert c == L(u)


def test_cone_join_from_zero_needs_a_graph():
    with pytest.raises(DimensionTooSmall):
        cone_join_from_zero(point(), ConeCertificate(0, {0: (0,)}, 0), point())


def test_cone_join_general():
    tri = simplex(2)
    C1 = star_cone_in(tri, 0, [1, 2])
    r = cone_join_general(tri, C1, point())
    rep = validate_cone(r.complex, r.cone)
    assert (rep.rad0, rep.rad1) == (1, 1)
    r = cone_join_general(tri, C1, edge())
    counts = script_tr_counts(r.complex, r.cone)
    assert counts[(3, 4)] == 1
    for u in r.left:
        for v in r.right:
            assert counts[(u, v)] == len(r.cone.paths[u]) - 1
    bad = C1.copy()
    bad.scripts = {}
    with pytest.raises(InvalidInputCone):
        cone_join_general(tri, bad, point())


def test_add_vertex_over_an_edge():
    X = PartiteComplex(3, [0, 1, 2, 2], [(0, 1, 2), (0, 1, 3)])
    base = star_cone_in(X, 0, [1, 2])
    lc = ConeCertificate(0, {0: (0,), 1: (0, 1)}, 0)
    C = cone_add_vertices(X, [0, 1, 2], base, [3], {3: lc})
    rep = validate_cone(X, C)
    assert max(rep.rad0, rep.rad1) <= 1 * (1 + 1)


def test_add_adjacent_vertices_rejected():
    Y = PartiteComplex(2, [0, 1, 0, 1], [(0, 1), (2, 3), (1, 2)])
    with pytest.raises(PreconditionViolated) as ei:
        cone_add_vertices(Y, [0, 1], ConeCertificate(0, {0: (0,), 1: (0, 1)}, 0), [2, 3],
                          {2: ConeCertificate(1, {1: (1,)}, 0), 3: ConeCertificate(1, {1: (1,)}, 0)})
    assert ei.value.clause == 2


def test_add_pendant_vertices_to_a_path():
    Y = PartiteComplex(2, [0, 1, 0, 1, 1], [(0, 1), (1, 2), (2, 3), (0, 4)])
    b = ConeCertificate(1, {1: (1,), 0: (1, 0), 2: (1, 2)}, 0)
    C = cone_add_vertices(Y, [0, 1, 2], b, [3, 4],
                          {3: ConeCertificate(2, {2: (2,)}, 0), 4: ConeCertificate(0, {0: (0,)}, 0)})
    rep = validate_cone(Y, C)
    assert rep.rad0 <= b.rad0() + 1


# ---------------------------------------------------------------- budgets

def test_radius_budget_tables():
    assert budget_A(2).R == [1, 18, 29502]
    assert budget_A(2)(1) == 2 ** 2 * 3 + (2 + 4)
    assert budget_A(2)(2) == 18 ** 3 * 4 + (18 + 18 ** 2 + 18 ** 3)
    B = budget_C(1)
    assert B.R[1] == 2 ** 4 * 5 + sum(2 ** j for j in range(1, 5))
    assert radius_h1_bound(2, 1) == Fraction(1, 1)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=3, max_size=3),
       st.lists(st.integers(0, 3), min_size=3, max_size=3),
       st.lists(st.integers(1, 3), min_size=3, max_size=3),
       st.lists(st.integers(0, 2), min_size=3, max_size=3))
def test_radius_budget_monotone(f, df, ell, dl):
    lo = radius_budget(lambda k: f[k - 1], lambda k: ell[k - 1], 3)
    hi = radius_budget(lambda k: f[k - 1] + df[k - 1], lambda k: ell[k - 1] + dl[k - 1], 3)
    assert lo.R[0] == hi.R[0] == 1
    assert all(a <= b for a, b in zip(lo.R, hi.R))


# ---------------------------------------------------------------- engine and providers

def _A(q, m):
    V = VectorSpace(make_field(q), m)
    quiet()
    return transversal_complex_A(V, standard_flag(V))


def test_engine_A2_F5():
    S = _A(5, 3)
    C, er = induction_engine(provider_A(S))
    assert C.kind == 0 and er.rad0 <= 3 + 2
    assert er.seed_within_bound


def test_engine_A3_F5():
    S = _A(5, 4)
    C, er = induction_engine(provider_A(S))
    rep = validate_cone(S.X, C)
    assert rep.kind == 1 and rep.nac
    assert max(rep.rad0, rep.rad1) <= budget_A(2).R[2] == er.budget
    assert er.seed_within_bound


def test_engine_rejects_non_full_layer():
    S = _A(3, 3)
    F = provider_A(S)
    X = S.X
    adj = X.adjacency_sets()
    # put an edge inside one layer
    u = F.layers[-1].vertices[0]
    v = next(iter(adj[u]))
    bad = Filtration(X, F.apex, F.star, F.seed_layers, F.layers + [Layer([u, v])], name="bad")
    with pytest.raises(ProviderContractViolated) as ei:
        induction_engine(bad)
    assert ei.value.condition == 2
    missing = Filtration(X, F.apex, F.star, F.seed_layers, F.layers[:-1], name="short")
    with pytest.raises(ProviderContractViolated) as ei:
        induction_engine(missing)
    assert ei.value.condition == 2


def test_provider_C2_F5():
    quiet()
    F = FormSpace(make_field(5), "alternating", 2)
    S = isotropic_flag_complex(F, F.chamber_E())
    C, er = induction_engine(provider_C(S))
    assert er.seed_bound is not None and er.seed_bound <= 5
    assert er.seed_within_bound
    validate_cone(S.X, C)


def test_provider_D2_F3():
    quiet()
    F = FormSpace(make_field(3), "hyperbolic", 2)
    S = isotropic_flag_complex(F, F.chamber_E())
    assert S.X.dim == 1
    C, er = induction_engine(provider_D(S))
    assert validate_cone(S.X, C).kind == 0
    assert er.seed_within_bound


def test_provider_D3_F3_and_transfer():
    quiet()
    F = FormSpace(make_field(3), "hyperbolic", 3)
    E = F.chamber_E()
    ST, SO = isotropic_flag_complex(F, E), oriflamme_complex(F, E)
    C, er = induction_engine(provider_D(ST))
    assert er.seed_within_bound
    Ct, rep = subdivision_transfer(ST, C, SO)
    out = validate_cone(SO.X, Ct)
    assert rep.within_bounds
    assert out.rad0 <= rep.c and out.rad1 <= 2 * rep.c
    # every ordered edge of the weak model falls in exactly one branch
    assert sum(rep.case_counts.values()) == 2 * ST.X.f_vector()[1]
    assert set(rep.case_counts) <= {1, 2, 3, 4, 5}
    # the oriflamme complex is the A_3 opposite complex; compare with the type-A provider
    SA = _A(3, 4)
    CA, erA = induction_engine(provider_A(SA))
    assert SA.X.f_vector() == SO.X.f_vector()
    assert max(out.rad0, out.rad1) <= 2 * max(erA.budget, rep.c)


def test_edge_map_branches():
    n = 3
    assert edge_map_case(n, 1, 1) == 5 and edge_map_case(n, 1, n) == 5
    assert edge_map_case(n, n - 1, 1) == 1
    assert edge_map_case(n, n - 1, n, v_is_Wu=True) == 2
    assert edge_map_case(n, 1, n - 1) == 3
    assert edge_map_case(n, n, n - 1, u_is_Wv=True) == 4


# ---------------------------------------------------------------- generic search

def test_search_octahedron():
    X = octahedron()
    rep = validate_cone(X, generic_cone_search(X))
    assert rep.rad0 == 2 and rep.rad1 <= 4


def test_search_hexagon_exhausts():
    H = hexagon()
    with pytest.raises(BudgetExhausted) as ei:
        generic_cone_search(H)
    rep = validate_cone(H, ei.value.partial)
    assert rep.kind == 0 and rep.rad0 == 3


def test_search_disconnected():
    with pytest.raises(Disconnected):
        generic_cone_search(discrete(2), kind=0)


def test_search_eccentricity_on_A2_F3():
    import networkx as nx
    X = build_opposite("group", "A", 2, 3).X
    G = nx.Graph(list(X.simplex_set(1)))
    for apex in (0, 5, 17):
        C = generic_cone_search(X, kind=0, apex=apex)
        assert validate_cone(X, C).rad0 == nx.eccentricity(G, apex)
