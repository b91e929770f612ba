import random

import pytest
from hypothesis import given, strategies as st

from bassfin.arith import INFINITY
from bassfin.dsl import parse_group_expr
from bassfin.pgroup import FinitePGroup, bassian_finite_bruteforce
from bassfin.report import PROPERTIES, Truth
from bassfin.suites import random_group_expr, shuffled_expr
from bassfin.verdict import (
    TORSION_ATOMS,
    Cyclic,
    GroupExpr,
    Term,
    check_implications,
    evaluate,
    flatten,
)

T, F, U = Truth.TRUE, Truth.FALSE, Truth.UNDECIDED
exprs = st.randoms(use_true_random=False).map(lambda r: random_group_expr(r))


def values(text: str) -> dict:
    return {p: f.value for p, f in evaluate(parse_group_expr(text)).findings.items()}


def test_ascending_chain_is_dedekind_but_not_bassian_finite():
    v = values('AscChain("")')
    assert v["bassian_finite"] is F and v["dedekind_finite"] is T


def test_ring_example():
    v = values("ARRing")
    assert v["bassian_finite"] is T and v["co_bassian_finite"] is F and v["finite_injective_rank"] is T
    assert v["relatively_co_hopfian"] is T and v["dedekind_finite"] is T
    assert v["co_hopfian"] is U
    assert v["co_finitely_hopfian"] is F


def test_ring_split_witness_is_an_orthogonal_pair():
    from bassfin.arring import RingElement

    w = evaluate(parse_group_expr("ARRing"))["co_bassian_finite"].witness
    a, b = (RingElement.from_json(x) for x in w["split"])
    assert a * b == 0 and a + b == 1 and a * a == a and not a.is_zero() and not b.is_zero()


def test_mixed_example():
    assert values("C(2,3)^2 + Prufer(3) + R1(res(0,1))")["bassian_finite"] is T


@pytest.mark.parametrize(
    "text,expected",
    [
        ("Q^3", {"finite_injective_rank": T, "co_finitely_hopfian": T, "co_hopfian": T}),
        ("Z", {"finite_injective_rank": T, "co_finitely_hopfian": F, "co_bassian_finite": T}),
        ("Q^w", {"finite_injective_rank": F, "co_finitely_hopfian": U, "dedekind_finite": F}),
        ("Z + C(2,1)", {"finite_injective_rank": F}),
        ("Prufer(5)", {"co_hopfian": T, "co_bassian_finite": T}),
        ("Prufer(5)^w", {"bassian_finite": F, "dedekind_finite": F}),
        ("UlmTail(3)", {"bassian_finite": F, "dedekind_finite": U}),
        ("C(2,1)^w + Z", {"bassian_finite": F, "dedekind_finite": F}),
        ("ARRing^w", {"bassian_finite": F, "dedekind_finite": F}),
        ("ARRing + Z^w", {"dedekind_finite": F, "bassian_finite": F}),
        ("ARRing + Z", {"bassian_finite": U, "co_hopfian": F}),
        ("DescChain(0)", {"bassian_finite": T}),
        ("(C(2,1))", {"co_bassian_finite": T}),
        ("C(2,1)^2", {"co_bassian_finite": F}),
    ],
)
def test_rule_table(text, expected):
    v = values(text)
    for prop, want in expected.items():
        assert v[prop] is want, prop


def test_omega_multiplicity_breaks_dedekind_finiteness():
    for atom in ["C(3,2)", "Prufer(2)", "Z", "Q", "R1(thr(2))", 'AscChain("1")', "DescChain(3)", "UlmTail(2)", "ARRing"]:
        assert values(f"{atom}^w")["dedekind_finite"] is F, atom


@given(exprs)
def test_implication_chain_holds(e):
    assert check_implications(evaluate(e))


@given(exprs, st.randoms(use_true_random=False))
def test_permutation_and_regrouping_invariance(e, rng):
    assert evaluate(shuffled_expr(rng, e)) == evaluate(e)


@given(exprs)
def test_certificates_are_well_formed(e):
    out = evaluate(e).to_json()
    assert list(out) == list(PROPERTIES)
    for f in out.values():
        assert f["value"] in ("TRUE", "FALSE", "UNDECIDED") and f["rule"] and f["anchor"]


@given(exprs)
def test_mixed_failures_name_the_failing_side(e):
    atoms = flatten(e)
    torsion = [Term(a, m) for a, m in atoms.items() if isinstance(a, TORSION_ATOMS)]
    free = [Term(a, m) for a, m in atoms.items() if not isinstance(a, TORSION_ATOMS)]
    if not torsion or not free:
        return
    v = evaluate(e)
    for prop in ("bassian_finite", "dedekind_finite", "co_hopfian", "relatively_co_hopfian"):
        t = evaluate(GroupExpr(tuple(torsion)))[prop].value
        f = evaluate(GroupExpr(tuple(free)))[prop].value
        assert v[prop].value is (t & f)
        if v[prop].value is F:
            side = v[prop].witness["side"]
            assert (t if side == "torsion" else f) is F


@given(exprs)
def test_co_bassian_is_syntactic_indecomposability(e):
    atoms = flatten(e)
    single = len(atoms) == 1 and next(iter(atoms.values())) == 1
    kinds = ("Cyclic", "Prufer", "Integers", "Rationals", "Rank1")
    want = single and type(next(iter(atoms))).__name__ in kinds
    assert (evaluate(e).value("co_bassian_finite") is T) == want


def test_finite_expressions_agree_with_bruteforce():
    rng = random.Random(7)
    for _ in range(60):
        parts = {}
        terms = []
        for _ in range(rng.randint(1, 3)):
            p, e, m = rng.choice((2, 3, 5)), rng.randint(1, 3), rng.randint(1, 2)
            terms.append(Term(Cyclic(p, e), m))
            parts.setdefault(p, []).extend([e] * m)
        groups = [FinitePGroup(p, tuple(exps)) for p, exps in parts.items()]
        if any(g.order > 2**12 for g in groups):
            continue
        expected = all(bassian_finite_bruteforce(g)[0] for g in groups)
        assert (evaluate(GroupExpr(tuple(terms))).value("bassian_finite") is T) == expected


def test_flatten_distributes_multiplicities():
    atoms = flatten(parse_group_expr("(Z + C(2,1)^2)^3 + Z + (Q)^w"))
    assert {str(a): m for a, m in atoms.items()} == {"Z": 4, "C(2,1)": 6, "Q": INFINITY}
