"""Named self-check suites, runnable from ``bassfin oracle suite NAME``.

Each suite exercises one family of laws with exact arithmetic and reports
pass/fail counts.  Randomized suites draw from ``random.Random(seed)``.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

from .arith import INFINITY, ExtNat, is_finite, nth_prime
from .arring import (
    ONE,
    RingElement,
    basis_idempotent,
    canonicalize,
    classify_mult,
    coker_order,
    divide_mod,
    divide_mod_z,
    refine,
    ring_inverse,
    split_idempotent,
)
from .locnum import EMPTY, Word, in_L, in_Qw, split_rational, words_of_length
from .pgroup import (
    FinitePGroup,
    all_groups,
    bassian_finite_bruteforce,
    embeds_criterion,
    find_monomorphism,
    sj_order,
    ulm_of_group,
)
from .report import Truth
from .typesys import (
    AscendingNest,
    CDDescriptor,
    CDEntry,
    Characteristic,
    ConstTail,
    Order,
    ResidueTail,
    ThresholdTail,
    TypeDescriptor,
    cd_verdict,
    idempotent_characteristic,
    type_compare,
    window_compare,
)
from .verdict import (
    ARRing,
    AscChain,
    Cyclic,
    DescChain,
    Group,
    GroupExpr,
    Integers,
    Prufer,
    Rank1,
    Rationals,
    Term,
    UlmTail,
    check_implications,
    evaluate,
)

DEFAULT_SEED = 1729


@dataclass
class SuiteResult:
    name: str
    seed: int
    passed: int = 0
    failed: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def check(self, ok: bool, label: Callable[[], str] | str) -> None:
        if ok:
            self.passed += 1
            return
        self.failed += 1
        if len(self.failures) < 20:
            self.failures.append(label() if callable(label) else label)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.passed > 0

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "seed": str(self.seed),
            "passed": str(self.passed),
            "failed": str(self.failed),
            "failures": self.failures,
            "seconds": f"{self.seconds:.3f}",
        }


# -- samplers ---------------------------------------------------------------


def random_rational(rng: random.Random, n_primes: int = 8, max_exp: int = 2) -> Fraction:
    num, den = 1, 1
    for i in range(n_primes):
        p = nth_prime(i)
        num *= p ** rng.randint(0, max_exp)
        den *= p ** rng.randint(0, max_exp)
    return Fraction(rng.choice((-1, 1)) * num, den)


def random_coefficient(rng: random.Random, w: Word, n_primes: int = 8) -> Fraction:
    """A random element of ``Q_w`` with small numerator; zero about 1 in 8."""
    if rng.random() < 0.125:
        return Fraction(0)
    num = rng.choice((-1, 1)) * rng.randint(1, 12)
    den = 1
    for i in range(n_primes):
        p = nth_prime(i)
        if not in_L(w, i) and rng.random() < 0.3:
            den *= p
    return Fraction(num, den)


def random_element(rng: random.Random, level: int) -> RingElement:
    return RingElement(level, tuple(random_coefficient(rng, w) for w in words_of_length(level)))


def _random_char(rng: random.Random) -> Characteristic:
    kind = rng.randrange(4)
    if kind == 0:
        tail = ConstTail(rng.random() < 0.5)
    elif kind == 1:
        k = rng.randint(0, 4)
        tail = ResidueTail(rng.randrange(1 << k), k)
    else:
        tail = ThresholdTail(rng.randint(0, 8))
    exc = {}
    for _ in range(rng.randint(0, 2)):
        exc[nth_prime(rng.randint(0, 10))] = INFINITY if rng.random() < 0.3 else rng.randint(0, 3)
    return Characteristic(tail, exc)


def random_atom(rng: random.Random, depth: int):
    kind = rng.randrange(11 if depth > 0 else 10)
    p = nth_prime(rng.randint(0, 3))
    if kind == 0:
        return Cyclic(p, rng.randint(1, 4))
    if kind == 1:
        return Prufer(p)
    if kind == 2:
        return Integers()
    if kind == 3:
        return Rationals()
    if kind in (4, 5):
        return Rank1(_random_char(rng))
    if kind == 6:
        return AscChain(Word("".join(rng.choice("01") for _ in range(rng.randint(0, 3)))))
    if kind == 7:
        return DescChain(rng.randint(0, 5))
    if kind == 8:
        return UlmTail(p)
    if kind == 9:
        return ARRing()
    return Group(random_group_expr(rng, depth - 1))


def random_group_expr(rng: random.Random, depth: int = 2) -> GroupExpr:
    terms = []
    for _ in range(rng.randint(1, 4)):
        r = rng.random()
        mult: ExtNat = 1 if r < 0.6 else (INFINITY if r < 0.75 else rng.randint(2, 5))
        terms.append(Term(random_atom(rng, depth), mult))
    return GroupExpr(tuple(terms))


def shuffled_expr(rng: random.Random, e: GroupExpr) -> GroupExpr:
    """Permute summands at every level and regroup the top level."""
    terms = [
        Term(Group(shuffled_expr(rng, t.atom.expr)), t.mult) if isinstance(t.atom, Group) else t
        for t in e.terms
    ]
    rng.shuffle(terms)
    if len(terms) >= 3 and rng.random() < 0.5:
        cut = rng.randint(1, len(terms) - 1)
        terms = [Term(Group(GroupExpr(tuple(terms[:cut])))), *terms[cut:]]
    return GroupExpr(tuple(terms))


# -- suites -----------------------------------------------------------------


def suite_l_class(res: SuiteResult, rng: random.Random) -> None:
    hits = [n for n in range(64) if in_L("1011", n)]
    res.check(hits == [11, 27, 43, 59], f"L_1011 below 64 = {hits}")


def suite_localization(res: SuiteResult, rng: random.Random) -> None:
    words = [w for n in range(4) for w in words_of_length(n)]
    for _ in range(1000):
        q = random_rational(rng)
        for w in words:
            w0, w1 = Word("0" + w.bits), Word("1" + w.bits)
            res.check(
                (in_Qw(q, w0) and in_Qw(q, w1)) == in_Qw(q, w),
                lambda: f"intersection law fails for {q} at {w.display()}",
            )
            q0, q1 = split_rational(q, w)
            res.check(
                q0 + q1 == q and in_Qw(q0, w0) and in_Qw(q1, w1),
                lambda: f"split_rational({q}, {w.display()}) = ({q0}, {q1})",
            )


def _suffix_product(w: Word, v: Word) -> RingElement:
    if v.bits.endswith(w.bits):
        return basis_idempotent(v)
    if w.bits.endswith(v.bits):
        return basis_idempotent(w)
    return RingElement.integer(0)


def suite_ring_arith(res: SuiteResult, rng: random.Random) -> None:
    words = [w for n in range(5) for w in words_of_length(n)]
    for w in words:
        for v in words:
            res.check(basis_idempotent(w) * basis_idempotent(v) == _suffix_product(w, v), f"e_{w.display()} * e_{v.display()}")
    zero, one = RingElement.integer(0), ONE
    for _ in range(300):
        x, y, z = (random_element(rng, rng.randint(0, 3)) for _ in range(3))
        res.check(x + y == y + x and x * y == y * x, "commutativity")
        res.check((x + y) + z == x + (y + z) and (x * y) * z == x * (y * z), "associativity")
        res.check(x * (y + z) == x * y + x * z, "distributivity")
        res.check(x + zero == x and x * one == x and x - x == zero, "identities")
        c = canonicalize(x)
        res.check(c == x and canonicalize(c) == c, "canonicalize is idempotent and value-preserving")
        m = rng.randint(c.level, 5)
        res.check(canonicalize(refine(c, m)).coeffs == c.coeffs and canonicalize(refine(c, m)).level == c.level, "refine/canonicalize round trip")
    e0, e1 = basis_idempotent("0"), basis_idempotent("1")
    res.check((2 * e0 + 3 * e1) * (3 * e0 + 2 * e1) == 6, "(2e0+3e1)(3e0+2e1) = 6")
    res.check(coker_order(2 * e0 + 3 * e1) == 6, "coker_order(2e0+3e1) = 6")


def _ext_mul(a: ExtNat, b: ExtNat) -> ExtNat:
    return INFINITY if not (is_finite(a) and is_finite(b)) else a * b


def suite_classify(res: SuiteResult, rng: random.Random) -> None:
    for _ in range(1000):
        a = random_element(rng, rng.randint(0, 3))
        b = random_element(rng, rng.randint(0, 3))
        ca, cb = classify_mult(a), classify_mult(b)
        oa = coker_order(a)
        res.check(ca.is_injective == is_finite(oa), lambda: f"injective vs coker for {a!r}")
        res.check(ca.is_unit == (oa == 1), lambda: f"unit vs coker for {a!r}")
        res.check(coker_order(a * b) == _ext_mul(oa, coker_order(b)), lambda: f"coker multiplicativity for {a!r}, {b!r}")
        if ca.is_unit:
            res.check(a * ring_inverse(a) == 1, lambda: f"inverse of {a!r}")
        res.check(ca.is_zero == a.is_zero() and cb.is_zero == b.is_zero(), "zero flag")


def suite_divisibility(res: SuiteResult, rng: random.Random) -> None:
    count = 0
    while count < 200:
        x = canonicalize(random_element(rng, rng.randint(1, 3)))
        if x.level == 0:
            continue
        count += 1
        for m in range(2, 13):
            y = divide_mod(x, m)
            defect = canonicalize(m * y - x)
            res.check(defect.level < x.level, lambda: f"divide_mod({x!r}, {m}) leaves level {defect.level}")
            z, k, levels = divide_mod_z(x, m)
            res.check(
                m * z - x == k and levels[-1] == 0 and all(a > b for a, b in zip(levels, levels[1:])),
                lambda: f"divide_mod_z({x!r}, {m})",
            )


def suite_superdecomp(res: SuiteResult, rng: random.Random) -> None:
    layer = [ONE]
    for _ in range(5):
        nxt = []
        for eps in layer:
            a, b = split_idempotent(eps)
            res.check(
                a * a == a and b * b == b and a * b == 0 and a + b == eps and not a.is_zero() and not b.is_zero(),
                lambda: f"split of {eps!r}",
            )
            nxt += [a, b]
        layer = nxt
    res.check(len(layer) == 32, "32 leaves")
    total = RingElement.integer(0)
    for i, a in enumerate(layer):
        res.check(a * a == a and not a.is_zero(), f"leaf {i} idempotent and nonzero")
        for b in layer[i + 1:]:
            res.check(a * b == 0, "leaves orthogonal")
        total = total + a
    res.check(total == 1, "leaves sum to 1")


def suite_type_chain(res: SuiteResult, rng: random.Random) -> None:
    chars = [idempotent_characteristic(Word("0" * i)) for i in range(7)]
    for i in range(7):
        for j in range(7):
            want = Order.EQ if i == j else (Order.LT if i < j else Order.GT)
            sym = type_compare(chars[i], chars[j])
            win = window_compare(chars[i], chars[j], 128)
            res.check(sym == want, f"symbolic tau(e_0^{i}) vs tau(e_0^{j}) = {sym}")
            res.check(win == sym, f"window tau(e_0^{i}) vs tau(e_0^{j}) = {win}, symbolic {sym}")


def suite_cd_verdicts(res: SuiteResult, rng: random.Random) -> None:
    v = cd_verdict(CDDescriptor((), (AscendingNest(EMPTY),)))
    res.check(v.value("dedekind_finite") is Truth.TRUE, "ascending nest: dedekind_finite")
    res.check(v.value("bassian_finite") is Truth.FALSE, "ascending nest: bassian_finite")
    res.check(v.value("relatively_co_hopfian") is Truth.FALSE, "ascending nest: relatively_co_hopfian")
    for _ in range(50):
        chi = _random_char(rng)
        hom = cd_verdict(CDDescriptor((CDEntry(TypeDescriptor(chi), INFINITY),)))
        res.check(hom.value("dedekind_finite") is Truth.FALSE, f"homogeneous w-rank {chi}")
        entries = tuple(CDEntry(TypeDescriptor(_random_char(rng)), rng.randint(1, 4)) for _ in range(rng.randint(1, 5)))
        fin = cd_verdict(CDDescriptor(entries))
        res.check(fin.value("bassian_finite") is Truth.TRUE, "finite rank CD group")


def suite_pgroup_embed(res: SuiteResult, rng: random.Random) -> None:
    for p in (2, 3):
        groups = all_groups(p, 6)
        for a in groups:
            for b in groups:
                crit = embeds_criterion(a, b)
                found = find_monomorphism(a, b) is not None
                res.check(crit == found, f"{a} -> {b}: criterion {crit}, search {found}")
            ok, _ = bassian_finite_bruteforce(a)
            res.check(ok, f"{a} not Bassian-finite by search")


def suite_sj_law(res: SuiteResult, rng: random.Random) -> None:
    for p in (2, 3):
        for g in all_groups(p, 6):
            f = ulm_of_group(g)
            for j in range(8):
                want = p ** sum(f.get(k, 0) for k in range(j))
                got = sj_order(g, j)
                res.check(got == want, f"|S_{j}({g})| = {got}, expected {want}")


def suite_verdict_chain(res: SuiteResult, rng: random.Random) -> None:
    for _ in range(200):
        e = random_group_expr(rng)
        v = evaluate(e)
        res.check(check_implications(v), lambda: f"implication chain broken for {e}")
        for _ in range(2):
            e2 = shuffled_expr(rng, e)
            res.check(evaluate(e2) == v, lambda: f"{e2} differs from {e}")


def suite_dsl_roundtrip(res: SuiteResult, rng: random.Random) -> None:
    from .dsl import parse_group_expr, serialize

    for _ in range(500):
        e = random_group_expr(rng)
        text = serialize(e)
        res.check(parse_group_expr(text) == e, lambda: f"round trip of {text}")


def _fuzz_inputs(rng: random.Random, n: int) -> Iterator[str]:
    from .dsl import serialize

    alphabet = 'CPrufeZQR1AscChainDesUlmTAg()^+w,;"0123456789 exc=inf-/'
    for i in range(n):
        mode = i % 3
        if mode == 0:
            yield bytes(rng.randrange(256) for _ in range(rng.randint(0, 24))).decode("latin-1")
        elif mode == 1:
            yield "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 24)))
        else:
            text = list(serialize(random_group_expr(rng, 1)))
            for _ in range(rng.randint(1, 3)):
                op = rng.randrange(3)
                k = rng.randrange(len(text) + 1)
                if op == 0 and text:
                    del text[min(k, len(text) - 1)]
                elif op == 1:
                    text.insert(k, rng.choice(alphabet))
                elif text:
                    text[min(k, len(text) - 1)] = rng.choice(alphabet)
            yield "".join(text)


def suite_cli_fuzz(res: SuiteResult, rng: random.Random) -> None:
    import contextlib
    import io
    import re

    from .cli import main

    for text in _fuzz_inputs(rng, 10_000):
        out, err = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = main(["check", "--", text])
        if code == 0:
            res.check(True, "")
        else:
            res.check(code == 1 and re.search(r"position \d+", err.getvalue()) is not None, lambda: f"{text!r}: exit {code}, {err.getvalue()!r}")


SUITES: dict[str, Callable[[SuiteResult, random.Random], None]] = {
    "l-class": suite_l_class,
    "localization": suite_localization,
    "ring-arith": suite_ring_arith,
    "classify": suite_classify,
    "divisibility": suite_divisibility,
    "superdecomp": suite_superdecomp,
    "type-chain": suite_type_chain,
    "cd-verdicts": suite_cd_verdicts,
    "pgroup-embed": suite_pgroup_embed,
    "sj-law": suite_sj_law,
    "verdict-chain": suite_verdict_chain,
    "dsl-roundtrip": suite_dsl_roundtrip,
    "cli-fuzz": suite_cli_fuzz,
}


def run_suite(name: str, seed: int = DEFAULT_SEED) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    res = SuiteResult(name, seed)
    start = time.perf_counter()
    SUITES[name](res, random.Random(seed))
    res.seconds = time.perf_counter() - start
    return res
