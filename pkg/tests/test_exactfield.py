from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nodalcy.errors import BadPrime, BadRoot, DivisionByZero, OrderMismatch
from nodalcy.exactfield import (
    CyclotomicNumber,
    PrimeFieldElement,
    cyclotomic_polynomial,
    default_primes,
    find_root_of_unity,
    parse_cyclotomic,
    reduce_mod_p,
    totient,
)

Z = CyclotomicNumber.zeta


def test_cyclotomic_polynomial_small():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(5) == (1, 1, 1, 1, 1)


def _polymul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


@pytest.mark.parametrize("N", range(1, 31))
def test_product_over_divisors_is_x_n_minus_one(N):
    prod = [1]
    for d in range(1, N + 1):
        if N % d == 0:
            prod = _polymul(prod, cyclotomic_polynomial(d))
    assert prod == [-1] + [0] * (N - 1) + [1]
    assert len(cyclotomic_polynomial(N)) == totient(N) + 1


def test_field_examples():
    assert Z(5, 1) + Z(5, 2) + Z(5, 3) + Z(5, 4) == CyclotomicNumber.from_rational(5, -1)
    assert Z(5, 1).inverse() == Z(5, 4)
    one = CyclotomicNumber.one(4)
    assert (one + Z(4)) * (one - Z(4)) == CyclotomicNumber.from_rational(4, 2)


def test_field_errors():
    with pytest.raises(OrderMismatch):
        Z(5) + Z(7)
    with pytest.raises(DivisionByZero):
        CyclotomicNumber.zero(5).inverse()
    with pytest.raises(ZeroDivisionError):
        Z(5) / CyclotomicNumber.zero(5)


def test_zeta_power_wraps():
    assert Z(7, 9) == Z(7, 2)
    assert Z(6, 3) == CyclotomicNumber.from_rational(6, -1)
    assert Z(5) ** -1 == Z(5, 4)


def test_json_round_trip():
    a = Z(5, 2) * Fraction(3, 7) - 1
    assert parse_cyclotomic(a.to_json(), 5) == a
    assert parse_cyclotomic("z^3", 5) == Z(5, 3)
    assert parse_cyclotomic("-z", 5) == -Z(5)
    assert parse_cyclotomic("3/2", 5) == CyclotomicNumber.from_rational(5, Fraction(3, 2))


ORDERS = st.sampled_from([1, 3, 4, 5, 7, 8, 12])
small = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def element_pair(draw, count=2):
    N = draw(ORDERS)
    d = totient(N)
    return [CyclotomicNumber(N, draw(st.lists(small, min_size=d, max_size=d))) for _ in range(count)]


@given(element_pair(count=3))
def test_field_axioms(xs):
    a, b, c = xs
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == CyclotomicNumber.zero(a.order)
    if not a.is_zero():
        assert a * a.inverse() == CyclotomicNumber.one(a.order)
        assert (b / a) * a == b


@given(element_pair(count=2), st.integers(0, 4))
def test_reduction_is_ring_homomorphism(xs, which):
    a, b = xs
    N = a.order
    p = default_primes(N, 5, start=11)[which]
    z = find_root_of_unity(N, p)
    denom_ok = all(c.denominator % p for x in xs for c in x.coeffs)
    if not denom_ok:
        return
    ra, rb = reduce_mod_p(a, p, z), reduce_mod_p(b, p, z)
    assert reduce_mod_p(a + b, p, z) == ra + rb
    assert reduce_mod_p(a * b, p, z) == ra * rb


def test_reduction_examples():
    s = sum((Z(5, k) for k in range(5)), CyclotomicNumber.zero(5))
    assert reduce_mod_p(s, 11, PrimeFieldElement(11, 3)).value == 0
    assert reduce_mod_p(CyclotomicNumber.from_rational(1, Fraction(3, 2)), 7, 1).value == 5
    z = PrimeFieldElement(11, 3)
    assert (reduce_mod_p(Z(5), 11, z) * reduce_mod_p(Z(5, 4), 11, z)).value == 1


def test_reduction_errors():
    with pytest.raises(BadPrime):
        reduce_mod_p(Z(5), 13, 3)
    with pytest.raises(BadPrime):
        reduce_mod_p(CyclotomicNumber.from_rational(5, Fraction(1, 11)), 11, 3)
    with pytest.raises(BadRoot):
        reduce_mod_p(Z(5), 11, 10)


def test_default_primes_have_roots():
    for N in (5, 7, 9):
        for p in default_primes(N, 3):
            assert (p - 1) % N == 0
            assert find_root_of_unity(N, p).multiplicative_order() == N
