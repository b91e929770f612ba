from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bassfin.arith import INFINITY
from bassfin.arring import (
    ONE,
    ZERO,
    InvalidCoefficient,
    InvalidLevel,
    LevelTooSmall,
    MissingWord,
    NotDivisible,
    NotIdempotent,
    NotUnit,
    RingElement,
    ZeroElement,
    basis_idempotent,
    canonicalize,
    char_of_idempotent,
    classify_mult,
    coker_order,
    divide_mod,
    divide_mod_z,
    element_new,
    refine,
    ring_inverse,
    ring_solve,
    split_idempotent,
)
from bassfin.locnum import Word, words_of_length
from bassfin.typesys import char_eval

from oracles import coker_oracle, in_Q_oracle, in_P_oracle, primes_td

SMALL_PRIMES = primes_td(8)
e0, e1 = basis_idempotent("0"), basis_idempotent("1")


def q_in(bits: str):
    """Strategy: elements of Q_w with small numerators."""
    allowed = [p for p in SMALL_PRIMES if not in_P_oracle(bits, p)]

    def build(sign, num, picks):
        den = 1
        for p, take in zip(allowed, picks):
            den *= p if take else 1
        return Fraction(sign * num, den)

    return st.builds(build, st.sampled_from([-1, 1]), st.integers(0, 12), st.lists(st.booleans(), min_size=len(allowed), max_size=len(allowed)))


@st.composite
def elements(draw, max_level=3):
    n = draw(st.integers(0, max_level))
    return RingElement(n, tuple(draw(q_in(w.bits)) for w in words_of_length(n)))


def dense(x: RingElement, n: int) -> dict[str, Fraction]:
    """Coefficients at level n read off by suffix (independent of refine)."""
    return {w.bits: x.coeffs[int(w.bits[n - x.level:] or "0", 2)] for w in words_of_length(n)}


# -- construction -----------------------------------------------------------


def test_element_new_examples():
    x = element_new(1, {"0": Fraction(1, 3), "1": Fraction(1, 2)})
    assert x.coeff("0") == Fraction(1, 3)
    with pytest.raises(InvalidCoefficient) as info:
        element_new(1, {"0": Fraction(1, 2), "1": 0})
    assert info.value.word == Word("0")
    assert element_new(0, {"": 1}) == ONE


def test_element_new_key_errors():
    with pytest.raises(MissingWord):
        element_new(1, {"0": 1})
    with pytest.raises(InvalidLevel):
        element_new(17, {})


def test_basis_idempotents():
    assert basis_idempotent("") == ONE
    assert e0.level == 1 and e0.coeffs == (1, 0)
    e10 = basis_idempotent("10")
    assert e10.level == 2 and e10.coeffs == (0, 0, 1, 0)


# -- refine and canonicalize ------------------------------------------------


def test_refine_examples():
    assert refine(ONE, 2).coeffs == (1, 1, 1, 1)
    x = element_new(1, {"0": 2, "1": 3})
    assert dict(zip([w.bits for w in words_of_length(2)], refine(x, 2).coeffs)) == {"00": 2, "01": 3, "10": 2, "11": 3}
    assert dict(zip([w.bits for w in words_of_length(2)], refine(e0, 2).coeffs)) == {"00": 1, "01": 0, "10": 1, "11": 0}
    with pytest.raises(LevelTooSmall):
        refine(e0, 0)


def test_canonicalize_examples():
    assert canonicalize(RingElement(2, (1, 1, 1, 1))).level == 0
    x = element_new(2, {"00": Fraction(1, 3), "10": Fraction(1, 3), "01": 0, "11": 0})
    c = canonicalize(x)
    assert c.level == 1 and c.coeffs == (Fraction(1, 3), 0)
    y = element_new(2, {"00": Fraction(1, 3), "10": 0, "01": 0, "11": 0})
    assert canonicalize(y).level == 2


@given(elements(), st.integers(0, 3))
def test_refine_matches_suffix_rule(x, extra):
    n = x.level + extra
    assert dict(zip([w.bits for w in words_of_length(n)], refine(x, n).coeffs)) == dense(x, n)


@given(elements(), st.integers(0, 3))
def test_refine_canonicalize_round_trip(x, extra):
    c = canonicalize(x)
    r = canonicalize(refine(x, x.level + extra))
    assert (r.level, r.coeffs) == (c.level, c.coeffs)
    # minimality: a canonical element at level >= 1 has unequal halves
    if c.level:
        h = len(c.coeffs) // 2
        assert c.coeffs[:h] != c.coeffs[h:]


# -- ring laws ----------------------------------------------------------------


def test_arithmetic_examples():
    assert e0 + e1 == 1
    assert e0 * basis_idempotent("10") == basis_idempotent("10")
    assert e0 * e1 == 0
    prod = canonicalize((2 * e0 + 3 * e1) * (3 * e0 + 2 * e1))
    assert prod.level == 0 and prod.coeffs == (6,)


@given(elements(), elements(), elements())
def test_commutative_ring_axioms(x, y, z):
    assert x + y == y + x and x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + ZERO == x and x * ONE == x and x - x == ZERO and -(-x) == x


@given(elements(), elements())
def test_operations_are_componentwise(x, y):
    n = max(x.level, y.level)
    dx, dy = dense(x, n), dense(y, n)
    assert dense(x + y, n) == {k: dx[k] + dy[k] for k in dx}
    assert dense(x * y, n) == {k: dx[k] * dy[k] for k in dx}


def test_multiplication_table_on_basis():
    words = [w for n in range(5) for w in words_of_length(n)]
    for w in words:
        for v in words:
            if v.bits.endswith(w.bits):
                want = basis_idempotent(v)
            elif w.bits.endswith(v.bits):
                want = basis_idempotent(w)
            else:
                want = ZERO
            assert basis_idempotent(w) * basis_idempotent(v) == want


def test_equality_and_hash_across_levels():
    assert refine(e0, 3) == e0 and hash(refine(e0, 3)) == hash(e0)
    assert RingElement(1, (5, 5)) == 5


# -- classification and cokernels --------------------------------------------


def test_classification_examples():
    c = classify_mult(2 * e0 + 3 * e1)
    assert c.is_injective and not c.is_unit and not c.is_idempotent
    assert classify_mult(3 * e0 + 2 * e1).is_unit
    c = classify_mult(e0)
    assert c.is_idempotent and c.is_zero_divisor and not c.is_injective
    assert classify_mult(ZERO).is_zero


def test_coker_examples():
    assert coker_order(2 * e0 + 3 * e1) == 6
    assert coker_order(3 * e0 + 2 * e1) == 1
    assert coker_order(e0) is INFINITY


@given(elements())
def test_coker_matches_residue_oracle(x):
    expected = coker_oracle(dense(x, x.level))
    assert coker_order(x) == (INFINITY if expected is None else expected)


@given(elements())
def test_classification_flags_are_consistent(x):
    c = classify_mult(x)
    assert c.is_injective == (not c.is_zero_divisor and not c.is_zero)
    assert not c.is_unit or c.is_injective
    assert not c.is_zero or not c.is_injective
    assert c.is_unit == (coker_order(x) == 1)


@given(elements(), elements())
def test_coker_is_multiplicative(x, y):
    a, b = coker_order(x), coker_order(y)
    want = INFINITY if INFINITY in (a, b) else a * b
    assert coker_order(x * y) == want


@given(elements())
def test_inverse(x):
    if classify_mult(x).is_unit:
        assert x * ring_inverse(x) == 1
    else:
        with pytest.raises(NotUnit):
            ring_inverse(x)


def test_unit_that_is_not_an_integer_unit():
    inv = ring_inverse(3 * e0 + 2 * e1)
    assert inv == RingElement(1, (Fraction(1, 3), Fraction(1, 2)))


def test_ring_solve():
    assert ring_solve(3 * e0 + 2 * e1, ONE) == ring_inverse(3 * e0 + 2 * e1)
    with pytest.raises(NotDivisible):
        ring_solve(2 * e0 + 3 * e1, ONE)


# -- idempotent splitting ---------------------------------------------------


def test_split_examples():
    assert split_idempotent(ONE) == (e0, e1)
    assert split_idempotent(e0) == (basis_idempotent("00"), basis_idempotent("10"))
    assert split_idempotent(e0 + e1) == (e0, e1)
    with pytest.raises(NotIdempotent):
        split_idempotent(2 * e0)
    with pytest.raises(ZeroElement):
        split_idempotent(ZERO)


def test_iterated_splitting_depth_five():
    layer = [ONE]
    for _ in range(5):
        nxt = []
        for eps in layer:
            a, b = split_idempotent(eps)
            assert a * a == a and b * b == b and a * b == 0 and a + b == eps
            assert not a.is_zero() and not b.is_zero()
            nxt += [a, b]
        layer = nxt
    assert len(layer) == 32
    assert sum(layer[1:], layer[0]) == 1
    assert all(layer[i] * layer[j] == 0 for i in range(32) for j in range(i + 1, 32))


# -- divisibility -------------------------------------------------------------


def test_divide_examples():
    assert divide_mod(e0, 2) == e0 + RingElement(1, (0, Fraction(1, 2)))
    assert 2 * divide_mod(e0, 2) - e0 == 1
    assert divide_mod(e1, 3) == RingElement(1, (Fraction(-1, 3), 0))
    assert 3 * divide_mod(e1, 3) - e1 == -1
    assert divide_mod(RingElement(1, (0, 0)), 5) == 0
    with pytest.raises(InvalidLevel):
        divide_mod(ONE, 2)


@given(elements(max_level=3).filter(lambda x: x.level >= 1), st.integers(2, 12))
def test_divide_mod_drops_a_level(x, m):
    y = divide_mod(x, m)
    for w, q in y.items():
        assert in_Q_oracle(q, w.bits)
    assert canonicalize(m * y - x).level < x.level


@given(elements(max_level=3), st.integers(2, 12))
def test_divide_mod_z_reaches_integers(x, m):
    y, k, levels = divide_mod_z(x, m)
    assert m * y - x == k
    assert levels[-1] == 0 and all(a > b for a, b in zip(levels, levels[1:]))


# -- characteristics of idempotents -----------------------------------------


def test_char_of_idempotent():
    primes = primes_td(40)
    assert all(char_eval(char_of_idempotent(""), p) == 0 for p in primes)
    inf0 = [p for p in primes if char_eval(char_of_idempotent("0"), p) is INFINITY]
    assert inf0 == primes[1::2]  # odd-indexed: 3, 7, 13, 19, ...
    inf00 = [i for i, p in enumerate(primes) if char_eval(char_of_idempotent("00"), p) is INFINITY]
    assert inf00 == [i for i in range(40) if i % 4]


def test_json_round_trip():
    x = RingElement(2, (Fraction(1, 3), 0, Fraction(1, 3), 0))
    assert x.to_json() == {"level": 1, "coeffs": {"0": "1/3"}}
    assert RingElement.from_json(x.to_json()) == x
    assert RingElement.from_json({"level": 1, "coeffs": {"0": 2, "1": "3"}}) == 2 * e0 + 3 * e1
    for bad in ({"coeffs": {}}, {"level": "1"}, {"level": 1, "coeffs": {"00": "1"}}, {"level": 1, "coeffs": {"0": 1.5}}):
        with pytest.raises(ValueError):
            RingElement.from_json(bad)
