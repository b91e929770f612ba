import itertools

import pytest

from bassfin.report import IMPLICATION_CHAIN, PROPERTIES, Finding, Truth, Verdict, check_implications, undecided

T, F, U = Truth.TRUE, Truth.FALSE, Truth.UNDECIDED


def verdict_with(**values: Truth) -> Verdict:
    return Verdict({p: Finding(values.get(p, U), "test", "test") for p in PROPERTIES})


def test_three_valued_and():
    assert T & T is T
    assert T & F is F and U & F is F
    assert T & U is U and U & U is U


def test_check_implications_examples():
    assert check_implications(verdict_with(dedekind_finite=T, bassian_finite=F))
    assert not check_implications(verdict_with(co_hopfian=T, bassian_finite=F))
    assert check_implications(verdict_with())


def test_check_implications_exhaustive():
    for values in itertools.product((T, F, U), repeat=len(IMPLICATION_CHAIN)):
        v = verdict_with(**dict(zip(IMPLICATION_CHAIN, values)))
        broken = any(
            values[i] is T and values[j] is F
            for i in range(len(values))
            for j in range(i + 1, len(values))
        )
        assert check_implications(v) is not broken


def test_verdict_requires_every_property():
    with pytest.raises(ValueError):
        Verdict({"bassian_finite": undecided()})


def test_verdict_json_shape():
    v = verdict_with(bassian_finite=T).replace(co_hopfian=Finding(F, "r", "a", {"k": "1"}))
    out = v.to_json()
    assert list(out) == list(PROPERTIES)
    assert out["co_hopfian"] == {"value": "FALSE", "rule": "r", "anchor": "a", "witness": {"k": "1"}}
    assert "witness" not in out["bassian_finite"]
    assert v.has_undecided()
