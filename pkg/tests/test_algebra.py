import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hdx_forge.algebra import (DiagonalIndex, KeyWidthOverflow, ModulusNotIrreducible,
                               NonPrimeCharacteristic, PolyRing, QuotientRing, ReducibleModulus,
                               RingMatrix, ZeroPolynomial, decode, determinant, elementary_matrix,
                               encode, fixed_width_key, identity_matrix, key_bits, limbs_to_key,
                               make_field, mat_pi_f, parse_poly, pi_f, poly, poly_is_irreducible,
                               wide_key_limbs)

F3 = make_field(3)
F5 = make_field(5)
F9 = make_field(3, 2, (1, 0, 1))


def gauss_mul(x, y):
    # F_9 as Z[i]/(3): an independent multiplication oracle
    a, b = x % 3, x // 3
    c, d = y % 3, y // 3
    return (a * c - b * d) % 3 + 3 * ((a * d + b * c) % 3)


def test_prime_field_encodings():
    assert list(F3.elements()) == [0, 1, 2]
    assert F3.order == 3


def test_f9_t_squared_is_minus_one():
    t = F9.from_coeffs((0, 1))
    assert F9.mul(t, t) == 2


def test_nonprime_characteristic():
    with pytest.raises(NonPrimeCharacteristic):
        make_field(4)


def test_reducible_modulus_rejected():
    with pytest.raises(ReducibleModulus):
        make_field(5, 2, (4, 0, 1))


def test_default_modulus_is_smallest_irreducible():
    K = make_field(3, 2)
    assert K.modulus == (1, 0, 1)


def test_f9_multiplication_matches_gaussian_oracle():
    for x, y in itertools.product(range(9), repeat=2):
        assert F9.mul(x, y) == gauss_mul(x, y)


@pytest.mark.parametrize("K", [F3, F5, F9, make_field(2, 3), make_field(5, 2)], ids=repr)
def test_field_axioms_sampled(K):
    rng = random.Random(7)
    q = K.order
    for _ in range(2000):
        a, b, c = (rng.randrange(q) for _ in range(3))
        assert K.mul(K.mul(a, b), c) == K.mul(a, K.mul(b, c))
        assert K.add(K.add(a, b), c) == K.add(a, K.add(b, c))
        assert K.mul(a, K.add(b, c)) == K.add(K.mul(a, b), K.mul(a, c))
        assert K.add(a, K.neg(a)) == 0
        if a:
            assert K.mul(a, K.inv(a)) == 1


def test_irreducibility_examples():
    assert poly_is_irreducible(parse_poly(F3, "t^2+1"))
    assert poly_is_irreducible(parse_poly(F5, "t^2+2"))
    assert not poly_is_irreducible(parse_poly(F5, "t^2-1"))
    with pytest.raises(ZeroPolynomial):
        poly_is_irreducible(poly(F3, []))


def test_irreducible_count_matches_necklace_formula():
    # monic irreducibles of degree 2 over F_p: (p^2 - p) / 2
    for p in (2, 3, 5):
        K = make_field(p)
        n = sum(poly_is_irreducible(poly(K, (a, b, 1))) for a in range(p) for b in range(p))
        assert n == (p * p - p) // 2


def test_pi_f_examples():
    f = parse_poly(F3, "t^2+1")
    r = pi_f(parse_poly(F3, "t^3"), f)
    assert r.residue.coeffs == (0, 2)
    assert pi_f(poly(F3, []), f).residue.is_zero()
    assert pi_f(f, f).residue.is_zero()
    with pytest.raises(ModulusNotIrreducible):
        pi_f(f, parse_poly(F3, "t^2-1"))


polys3 = st.lists(st.integers(0, 2), max_size=6).map(lambda c: poly(F3, c))


@settings(max_examples=200, deadline=None)
@given(polys3, polys3)
def test_pi_f_is_a_ring_homomorphism(a, b):
    f = parse_poly(F3, "t^2+1")
    assert pi_f(a * b, f) == pi_f(a, f) * pi_f(b, f)
    assert pi_f(a + b, f) == pi_f(a, f) + pi_f(b, f)


def test_elementary_matrix_examples():
    e = elementary_matrix(2, 1, 2, 1, F3)
    assert e[0, 1] == 1 and determinant(e) == 1
    assert e.entries == (1, 1, 0, 0, 1, 0, 0, 0, 1)
    R = PolyRing(F3)
    e31 = elementary_matrix(2, 3, 1, R.t(), R)
    assert e31[2, 0] == R.t()
    prod = elementary_matrix(2, 1, 2, 1, F3) @ elementary_matrix(2, 1, 2, 2, F3)
    assert prod.is_identity()
    with pytest.raises(DiagonalIndex):
        elementary_matrix(2, 1, 1, 1, F3)


def test_mat_pi_f_examples():
    R = PolyRing(F3)
    f = parse_poly(F3, "t^2+1")
    Q = QuotientRing(f)
    assert mat_pi_f(identity_matrix(3, R), Q).is_identity()
    img = mat_pi_f(elementary_matrix(2, 3, 1, R.t(), R), Q)
    assert img[2, 0] == Q.from_poly(R.t()) and img[2, 0] != 0
    assert mat_pi_f(elementary_matrix(2, 3, 1, f, R), Q).is_identity()


def test_identity_key_digits():
    k = encode(identity_matrix(3, F3))
    digits = []
    for _ in range(9):
        k, r = divmod(k, 3)
        digits.append(r)
    assert digits[::-1] == [1, 0, 0, 0, 1, 0, 0, 0, 1]


def test_key_widths():
    assert key_bits(3, 9) == 36
    fixed_width_key(identity_matrix(3, F9))
    with pytest.raises(KeyWidthOverflow):
        fixed_width_key(identity_matrix(6, make_field(31)))
    big = 2 ** 130 + 12345
    assert limbs_to_key(wide_key_limbs(big)) == big


def test_encode_roundtrip_random():
    rng = np.random.default_rng(0)
    for K in (F3, F9):
        seen = set()
        for _ in range(10 ** 4 // 2):
            ent = tuple(int(x) for x in rng.integers(0, K.order, 9))
            A = RingMatrix(3, ent, K)
            k = encode(A)
            assert decode(k, 3, K, sl=False) == A
            seen.add((k, ent))
        assert len({k for k, _ in seen}) == len({e for _, e in seen})


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 8), min_size=9, max_size=9),
       st.lists(st.integers(0, 8), min_size=9, max_size=9))
def test_determinant_multiplicative(a, b):
    A = RingMatrix(3, tuple(a), F9)
    B = RingMatrix(3, tuple(b), F9)
    assert determinant(A @ B) == F9.mul(determinant(A), determinant(B))


def test_adjugate_inverse():
    A = elementary_matrix(2, 1, 3, 2, F5) @ elementary_matrix(2, 2, 1, 3, F5)
    assert (A @ A.inverse()).is_identity()
