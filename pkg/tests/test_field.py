import random

import pytest
from hypothesis import given, strategies as st

from starcore.errors import UsageError
from starcore.field import FieldElement, PrimeChar, fe_add, fe_inv, fe_mul, inverse_mod, is_prime

PRIMES = [3, 5, 7, 11, 101]


def test_examples():
    F7 = PrimeChar(7)
    assert fe_add(F7(3), F7(5)).value == 1
    assert fe_add(F7(0), F7(4)).value == 4
    assert fe_add(PrimeChar(3)(2), PrimeChar(3)(2)).value == 1
    assert fe_inv(F7(3)).value == 5
    assert fe_inv(F7(1)).value == 1
    assert fe_inv(PrimeChar(11)(2)).value == 6


def test_values_are_reduced():
    F7 = PrimeChar(7)
    assert F7(-1).value == 6
    assert F7(15).value == 1
    assert (F7(3) - F7(5)).value == 5


def test_prime_char_validation():
    for bad in (2, 1, 0, 9, 15, 2**31 - 1 + 2, 2**31):
        with pytest.raises(UsageError):
            PrimeChar(bad)
    assert PrimeChar(2**31 - 1).p == 2**31 - 1


def test_is_prime_small():
    expected = [n for n in range(2, 200) if all(n % d for d in range(2, n))]
    assert [n for n in range(200) if is_prime(n)] == expected


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        fe_inv(PrimeChar(7)(0))
    with pytest.raises(ZeroDivisionError):
        inverse_mod(0, 7)


def test_mismatched_characteristic():
    with pytest.raises(UsageError):
        fe_add(PrimeChar(7)(1), PrimeChar(11)(1))


def test_powers_of_p():
    F = PrimeChar(7)
    assert F.is_power(1) and F.is_power(49)
    assert not F.is_power(14)
    assert F.exponent(343) == 3
    with pytest.raises(UsageError):
        F.exponent(21)


@pytest.mark.parametrize("p", PRIMES)
def test_field_axioms_bulk(p):
    # 10^4 random triples per prime
    F = PrimeChar(p)
    rng = random.Random(p)
    for _ in range(10_000):
        a, b, c = (F(rng.randrange(p)) for _ in range(3))
        assert fe_add(a, b) == fe_add(b, a)
        assert fe_mul(a, b) == fe_mul(b, a)
        assert fe_add(fe_add(a, b), c) == fe_add(a, fe_add(b, c))
        assert fe_mul(fe_mul(a, b), c) == fe_mul(a, fe_mul(b, c))
        assert fe_mul(a, fe_add(b, c)) == fe_add(fe_mul(a, b), fe_mul(a, c))
        if a.value:
            assert fe_inv(fe_inv(a)) == a
            assert fe_mul(a, fe_inv(a)).value == 1


@given(st.sampled_from(PRIMES), st.integers(), st.integers())
def test_inverse_property(p, a, b):
    F = PrimeChar(p)
    x, y = F(a), F(b)
    if y.value:
        assert (x / y) * y == x
    assert x ** p == x  # Fermat


def test_field_element_reduces_on_construction():
    assert FieldElement(9, PrimeChar(7)).value == 2
    assert FieldElement(-9, PrimeChar(7)).value == 5
