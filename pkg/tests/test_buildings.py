import collections
import warnings

import numpy as np
import pytest

from hdx_forge.algebra import make_field
from hdx_forge.complexes import (FormKindMismatch, FormSpace, VectorSpace, WittIndexZero,
                                 gaussian_binomial, isotropic_flag_complex, opposite_group_model,
                                 oriflamme_complex, standard_flag, transversal_complex_A,
                                 typed_isomorphic)

F3 = make_field(3)
F5 = make_field(5)


def test_group_model_a2_f5():
    X = opposite_group_model(2, F5)
    assert X.f_vector() == [2 * 25, 125]


def test_group_model_a3_f5_counts():
    X = opposite_group_model(3, F5)
    U, subs = X.group_data
    assert U.order == 5 ** 6
    counts = np.bincount(X.vtype)
    assert list(counts) == [U.order // H.order for H in subs]
    assert sorted(counts) == [125, 125, 625]


def test_group_model_a2_f3_is_bipartite_cubic():
    X = opposite_group_model(2, F3)
    assert X.f_vector() == [18, 27]
    assert (np.bincount(X.simplices(1).ravel()) == 3).all()


def test_flag_model_matches_group_model():
    V = VectorSpace(F5, 3)
    T = transversal_complex_A(V, standard_flag(V))
    assert typed_isomorphic(T.X, opposite_group_model(2, F5)) is not None
    V = VectorSpace(F3, 3)
    T = transversal_complex_A(V, standard_flag(V))
    assert typed_isomorphic(T.X, opposite_group_model(2, F3)) is not None


def test_empty_transversality_gives_full_flag_complex():
    V = VectorSpace(F3, 3)
    T = transversal_complex_A(V, ())
    lines = gaussian_binomial(3, 1, 3)
    assert T.X.f_vector() == [2 * lines, lines * 4]


def test_lines_transversal_to_a_full_flag():
    V = VectorSpace(F3, 3)
    T = transversal_complex_A(V, standard_flag(V))
    assert int((T.X.vtype == 0).sum()) == 9


def test_size_condition_reported():
    V = VectorSpace(F3, 4)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        T = transversal_complex_A(V, standard_flag(V))
    assert T.size_condition["lhs"] == 4 and not T.size_condition["holds"]


def test_symplectic_lines_all_isotropic():
    S = FormSpace(F3, "alternating", 2)
    assert len(S.ti_subspaces(1)) == (3 ** 4 - 1) // (3 - 1) == 40
    assert S.witt_index_check()


def test_hyperbolic_lagrangians_split_evenly():
    S = FormSpace(F3, "hyperbolic", 2)
    L = S.ti_subspaces(2)
    c = collections.Counter(S.lagrangian_class(U) for U in L)
    assert len(c) == 2 and c[0] == c[1]


def test_gram_nondegenerate():
    for kind, n in [("alternating", 2), ("hyperbolic", 3), ("symmetric", 2)]:
        S = FormSpace(F3, kind, n)
        M = np.array(S.gram) % 3
        # determinant mod 3 through exact integers
        det = int(round(np.linalg.det(M))) % 3
        assert det != 0
        assert S.witt_index_check()


def test_oriflamme_d3_is_a3():
    S = FormSpace(F3, "hyperbolic", 3)
    O = oriflamme_complex(S, S.chamber_E())
    assert typed_isomorphic(O.X, opposite_group_model(3, F3)) is not None


def test_oriflamme_without_transversality_is_a3_building():
    S = FormSpace(F3, "hyperbolic", 3)
    O = oriflamme_complex(S)
    V = VectorSpace(F3, 4)
    assert O.X.f_vector() == transversal_complex_A(V, ()).X.f_vector()


def test_form_errors():
    with pytest.raises(FormKindMismatch):
        oriflamme_complex(FormSpace(F3, "alternating", 2))
    with pytest.raises(WittIndexZero):
        FormSpace(F3, "hyperbolic", 0)
    with pytest.raises(FormKindMismatch):
        FormSpace(make_field(2), "alternating", 1)


def test_weak_model_every_corank_one_face_has_two_extensions():
    S = FormSpace(F3, "hyperbolic", 3)
    W = isotropic_flag_complex(S, S.chamber_E())
    lag = {U for U in W.subspaces if len(U) == 3}
    for U in W.subspaces:
        if len(U) == 2:
            ext = [L for L in lag if S.V.is_subspace(U, L)]
            assert len(ext) <= 2
    full = isotropic_flag_complex(S)
    full_lag = [U for U in full.subspaces if len(U) == 3]
    for U in full.subspaces:
        if len(U) == 2:
            assert sum(S.V.is_subspace(U, L) for L in full_lag) == 2
