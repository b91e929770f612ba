import pytest
from hypothesis import given, strategies as st

from bassfin.arith import INFINITY
from bassfin.locnum import EMPTY, Word
from bassfin.report import Truth
from bassfin.typesys import (
    AscendingNest,
    CDDescriptor,
    CDEntry,
    Characteristic,
    ConstTail,
    DescendingThreshold,
    Order,
    ResidueTail,
    ThresholdTail,
    TypeDescriptor,
    atc_holds,
    cd_verdict,
    char_eval,
    idempotent_characteristic,
    parse_characteristic,
    type_compare,
    window_compare,
)
from bassfin.report import check_implications

from oracles import primes_td

PRIMES = primes_td(128)


def tau(bits: str) -> Characteristic:
    return idempotent_characteristic(Word(bits))


tails = st.one_of(
    st.builds(ConstTail, st.booleans()),
    st.integers(0, 4).flatmap(lambda k: st.builds(ResidueTail, st.integers(0, (1 << k) - 1), st.just(k))),
    st.builds(ThresholdTail, st.integers(0, 12)),
)
heights = st.one_of(st.integers(0, 3), st.just(INFINITY))
chars = st.builds(
    Characteristic,
    tails,
    st.dictionaries(st.sampled_from(PRIMES[:12]), heights, max_size=3),
)


def test_char_eval_examples():
    assert char_eval(Characteristic(), 7) == 0
    assert char_eval(Characteristic(ResidueTail(0, 1)), 3) is INFINITY
    assert char_eval(Characteristic(ThresholdTail(4)), 11) is INFINITY
    assert char_eval(Characteristic(ThresholdTail(4)), 7) == 0


def test_exceptions_override_tail():
    chi = Characteristic(ConstTail(True), {5: 2})
    assert chi(5) == 2 and chi(7) is INFINITY
    with pytest.raises(ValueError):
        Characteristic(ConstTail(False), {4: 1})


def test_tail_validation():
    with pytest.raises(ValueError):
        ResidueTail(2, 1)
    with pytest.raises(ValueError):
        ResidueTail(0, 17)
    with pytest.raises(ValueError):
        ThresholdTail(-1)


def test_compare_examples():
    assert type_compare(tau(""), tau("0")) is Order.LT
    assert type_compare(tau("0"), tau("1")) is Order.INCOMPARABLE
    base = Characteristic(ThresholdTail(3), {5: 1})
    raised = Characteristic(ThresholdTail(3), {5: 3})
    assert type_compare(base, raised) is Order.EQ


def test_finite_vs_infinite_difference_is_not_equivalence():
    assert type_compare(Characteristic(), Characteristic(ConstTail(False), {2: INFINITY})) is Order.LT


def test_strict_ascent_of_idempotent_types():
    chain = [tau("0" * i) for i in range(7)]
    for i in range(6):
        assert type_compare(chain[i], chain[i + 1]) is Order.LT
        assert window_compare(chain[i], chain[i + 1], 128) is Order.LT


def _window_oracle(a: Characteristic, b: Characteristic) -> Order:
    le = all(a(p) <= b(p) for p in PRIMES)
    ge = all(a(p) >= b(p) for p in PRIMES)
    return Order.EQ if le and ge else Order.LT if le else Order.GT if ge else Order.INCOMPARABLE


@given(chars, chars)
def test_window_compare_matches_pointwise_oracle(a, b):
    assert window_compare(a, b, 128) is _window_oracle(a, b)


@given(chars, chars)
def test_symbolic_compare_is_antisymmetric(a, b):
    flip = {Order.LT: Order.GT, Order.GT: Order.LT, Order.EQ: Order.EQ, Order.INCOMPARABLE: Order.INCOMPARABLE}
    assert type_compare(b, a) is flip[type_compare(a, b)]


@given(chars, chars)
def test_pointwise_order_implies_type_order(a, b):
    # same tail: the window sees every difference, so agreement is exact
    b2 = Characteristic(a.tail, b.exceptions)
    if _window_oracle(a, b2) in (Order.LT, Order.EQ):
        assert type_compare(a, b2) in (Order.LT, Order.EQ)


@given(chars, chars, chars)
def test_type_order_is_transitive(a, b, c):
    le = lambda x, y: type_compare(x, y) in (Order.LT, Order.EQ)
    if le(a, b) and le(b, c):
        assert le(a, c)


@given(chars)
def test_characteristic_text_round_trip(chi):
    assert parse_characteristic(str(chi)) == chi


def test_parse_characteristic_forms():
    assert parse_characteristic("res(1,2);exc(2=inf,5=3)") == Characteristic(ResidueTail(1, 2), {2: INFINITY, 5: 3})
    assert parse_characteristic("const0") == Characteristic()
    for bad in ("res(1)", "thr(x)", "const1", "thr(1);exc(4=1)", "thr(1);exc(2=1,2=2)"):
        with pytest.raises(ValueError):
            parse_characteristic(bad)


# -- completely decomposable descriptors ------------------------------------


def test_atc_examples():
    assert not atc_holds(CDDescriptor((), (AscendingNest(EMPTY),)))
    assert atc_holds(CDDescriptor((CDEntry(TypeDescriptor(tau("0")), 3),)))
    assert atc_holds(CDDescriptor((), (DescendingThreshold(0),)))


def test_descending_family_types_descend():
    fam = DescendingThreshold(2)
    for i in range(5):
        assert type_compare(fam.type_at(i).representative, fam.type_at(i + 1).representative) is Order.GT


def test_ascending_nest_verdict():
    v = cd_verdict(CDDescriptor((), (AscendingNest(EMPTY),)))
    assert v.value("dedekind_finite") is Truth.TRUE
    assert v.value("bassian_finite") is Truth.FALSE
    assert v.value("relatively_co_hopfian") is Truth.FALSE
    shift = v["bassian_finite"].witness["shift"]
    for step in shift:
        a, b = parse_characteristic(step["from"]), parse_characteristic(step["to"])
        assert type_compare(a, b) is Order.LT and step["compare"] == "LT"


def test_homogeneous_omega_rank():
    v = cd_verdict(CDDescriptor((CDEntry(TypeDescriptor(tau("1")), INFINITY),)))
    assert v.value("dedekind_finite") is Truth.FALSE
    assert v.value("bassian_finite") is Truth.FALSE


def test_three_distinct_finite_types():
    entries = tuple(CDEntry(TypeDescriptor(tau(b)), 1) for b in ("", "0", "1"))
    v = cd_verdict(CDDescriptor(entries))
    assert v.value("bassian_finite") is Truth.TRUE
    assert v.value("finite_injective_rank") is Truth.TRUE
    assert v["finite_injective_rank"].witness == {"rank": "3"}


def test_divisible_finite_rank_is_co_hopfian():
    v = cd_verdict(CDDescriptor((CDEntry(TypeDescriptor(Characteristic(ConstTail(True))), 2),)))
    assert v.value("co_hopfian") is Truth.TRUE
    assert v.value("co_finitely_hopfian") is Truth.TRUE


def test_non_divisible_witness_prime_has_finite_height():
    v = cd_verdict(CDDescriptor((CDEntry(TypeDescriptor(tau("01")), 1),)))
    w = v["co_hopfian"].witness
    assert v.value("co_hopfian") is Truth.FALSE
    assert tau("01")(int(w["prime"])) != INFINITY


@given(st.lists(st.tuples(chars, st.integers(1, 4)), min_size=1, max_size=5))
def test_finite_rank_cd_is_bassian_finite(items):
    v = cd_verdict(CDDescriptor(tuple(CDEntry(TypeDescriptor(c), m) for c, m in items)))
    assert v.value("bassian_finite") is Truth.TRUE
    assert v.value("finite_injective_rank") is Truth.TRUE
    assert check_implications(v)


@given(st.lists(st.tuples(chars, st.one_of(st.integers(1, 3), st.just(INFINITY))), max_size=4), st.booleans(), st.booleans())
def test_cd_verdict_properties(items, asc, desc):
    families = ((AscendingNest(Word("1")),) if asc else ()) + ((DescendingThreshold(1),) if desc else ())
    g = CDDescriptor(tuple(CDEntry(TypeDescriptor(c), m) for c, m in items), families)
    v = cd_verdict(g)
    assert check_implications(v)
    assert v.value("bassian_finite") is v.value("relatively_co_hopfian")
    assert (v.value("bassian_finite") is Truth.TRUE) == atc_holds(g)
    if any(m is INFINITY for _, m in items):
        assert v.value("dedekind_finite") is Truth.FALSE
    if asc:
        assert v.value("bassian_finite") is Truth.FALSE
