from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bassfin.arith import (
    INFINITY,
    NotPrime,
    ZeroArgument,
    format_extnat,
    format_rational,
    is_finite,
    nth_prime,
    parse_extnat,
    parse_rational,
    prime_factors,
    prime_index,
    valuation,
)

from oracles import is_prime_td, prime_divisors_td, primes_td


def test_nth_prime_matches_trial_division():
    assert [nth_prime(i) for i in range(200)] == primes_td(200)


@pytest.mark.parametrize("i,p", [(0, 2), (4, 11), (9, 29)])
def test_nth_prime_examples(i, p):
    assert nth_prime(i) == p
    assert prime_index(p) == i


def test_prime_index_round_trip():
    for i in range(2000):
        assert prime_index(nth_prime(i)) == i


@pytest.mark.parametrize("n", [0, 1, 4, 9, 91])
def test_prime_index_rejects_non_primes(n):
    with pytest.raises(NotPrime):
        prime_index(n)


def test_nth_prime_rejects_negative():
    with pytest.raises(ValueError):
        nth_prime(-1)


@given(st.integers(-10**6, 10**6).filter(bool), st.integers(1, 10**6), st.sampled_from([2, 3, 5, 7, 11]))
def test_valuation_matches_definition(a, b, p):
    q = Fraction(a, b)
    v = valuation(q, p)
    scaled = q / Fraction(p) ** v
    assert scaled.numerator % p != 0 and scaled.denominator % p != 0


def test_valuation_examples():
    assert valuation(Fraction(12, 5), 2) == 2
    assert valuation(Fraction(5, 12), 2) == -2
    assert valuation(7, 3) == 0


def test_valuation_of_zero():
    with pytest.raises(ZeroArgument):
        valuation(0, 2)


@given(st.integers(-10**7, 10**7))
def test_prime_factors_matches_oracle(n):
    assert list(prime_factors(n)) == (prime_divisors_td(n) if abs(n) > 1 else [])
    assert all(is_prime_td(p) for p in prime_factors(n))


@given(st.fractions())
def test_rational_text_round_trip(q):
    assert parse_rational(format_rational(q)) == q


def test_parse_rational_errors():
    for bad in ["", "1/", "a", "1/-2", "--1", "1.5"]:
        with pytest.raises(ValueError):
            parse_rational(bad)
    with pytest.raises(ZeroDivisionError):
        parse_rational("3/0")


def test_infinity_arithmetic_and_order():
    assert INFINITY > 10**100 and not INFINITY < 5
    assert 3 + INFINITY is INFINITY and INFINITY + 3 is INFINITY
    assert INFINITY * 0 == 0 and INFINITY * 2 is INFINITY
    assert not is_finite(INFINITY) and is_finite(0)
    assert sorted([INFINITY, 3, 0]) == [0, 3, INFINITY]


def test_extnat_text():
    assert format_extnat(INFINITY) == "INFINITY"
    assert format_extnat(7) == "7"
    for text in ("INFINITY", "inf", "w"):
        assert parse_extnat(text) is INFINITY
    assert parse_extnat("12") == 12
    with pytest.raises(ValueError):
        parse_extnat("-1")
