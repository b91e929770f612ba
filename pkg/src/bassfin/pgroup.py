"""Finite abelian p-groups, brute-force embedding search, and torsion deciders.

A finite p-group is ``Z/p^e1 + ... + Z/p^ek`` with ``e1 >= ... >= ek >= 1``;
elements are coordinate tuples.  Infinite torsion groups are handled only
through :class:`TorsionDescriptor` (Ulm data, an unbounded-tail flag and the
rank of the divisible part).
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional

from sympy import isprime

from .arith import INFINITY, ExtNat, format_extnat, is_finite
from .report import Finding, Truth, Verdict

__all__ = [
    "FinitePGroup",
    "PGroupHom",
    "PrimeMismatch",
    "SearchSpaceTooLarge",
    "TorsionDescriptor",
    "PrimeData",
    "ulm_of_group",
    "height",
    "sj_order",
    "embeds_criterion",
    "find_monomorphism",
    "bassian_finite_bruteforce",
    "torsion_verdict",
    "all_groups",
]

MAX_SOURCE_ORDER = 2**12
MAX_TARGET_ORDER = 2**16

Element = tuple[int, ...]


class PrimeMismatch(ValueError):
    pass


class SearchSpaceTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class FinitePGroup:
    p: int
    exponents: tuple[int, ...] = ()

    def __post_init__(self):
        if not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")
        exps = tuple(sorted((int(e) for e in self.exponents), reverse=True))
        if any(e < 1 for e in exps):
            raise ValueError("exponents must be >= 1")
        object.__setattr__(self, "exponents", exps)

    @property
    def moduli(self) -> tuple[int, ...]:
        return tuple(self.p**e for e in self.exponents)

    @property
    def order(self) -> int:
        return self.p ** sum(self.exponents)

    @property
    def rank(self) -> int:
        return len(self.exponents)

    def zero(self) -> Element:
        return (0,) * self.rank

    def elements(self) -> Iterator[Element]:
        """All elements, in lexicographic order of coordinates."""
        return itertools.product(*(range(m) for m in self.moduli))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % m for a, b, m in zip(x, y, self.moduli))

    def scale(self, c: int, x: Element) -> Element:
        return tuple(c * a % m for a, m in zip(x, self.moduli))

    def generator(self, i: int) -> Element:
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def socle(self) -> list[Element]:
        return [x for x in self.elements() if self.scale(self.p, x) == self.zero()]

    def multiples(self, k: int) -> set[Element]:
        """The subgroup ``p^k G``, enumerated."""
        c = self.p**k
        return {self.scale(c, x) for x in self.elements()}

    def __str__(self) -> str:
        if not self.exponents:
            return f"C({self.p},0)"
        return "+".join(f"C({self.p},{e})" for e in self.exponents)

    @classmethod
    def parse(cls, text: str) -> "FinitePGroup":
        """Parse ``C(p,e1)+C(p,e2)+...``; ``C(p,0)`` alone is the trivial group."""
        parts = [t.strip() for t in text.split("+")]
        primes, exps = set(), []
        for part in parts:
            m = re.fullmatch(r"C\(\s*(\d+)\s*,\s*(\d+)\s*\)", part)
            if m is None:
                raise ValueError(f"malformed cyclic summand {part!r}")
            primes.add(int(m.group(1)))
            if int(m.group(2)) > 0:
                exps.append(int(m.group(2)))
        if len(primes) != 1:
            raise PrimeMismatch(f"summands use several primes: {sorted(primes)}")
        return cls(primes.pop(), tuple(exps))


def ulm_of_group(g: FinitePGroup) -> dict[int, int]:
    """``f(n)`` = number of cyclic summands of order ``p^(n+1)``."""
    return {e - 1: c for e, c in sorted(Counter(g.exponents).items())}


def height(g: FinitePGroup, x: Element) -> ExtNat:
    """Largest ``m`` with ``x`` in ``p^m G``; INFINITY for 0."""
    if all(a == 0 for a in x):
        return INFINITY
    best = None
    for a, e in zip(x, g.exponents):
        if a == 0:
            continue
        v = 0
        while a % g.p == 0:
            a //= g.p
            v += 1
        best = v if best is None else min(best, v)
    return best


def sj_order(g: FinitePGroup, j: int) -> int:
    """``|G[p] / (p^j G)[p]|`` by enumerating the socle and its cosets."""
    socle = g.socle()
    socle_set = set(socle)
    sub = [x for x in g.multiples(j) if x in socle_set]
    cosets = {frozenset(g.add(x, h) for h in sub) for x in socle}
    return len(cosets)


def embeds_criterion(a: FinitePGroup, b: FinitePGroup) -> bool:
    """Ulm-tail test: ``sum_{k>=n} f_A(k) <= sum_{k>=n} f_B(k)`` for all ``n``."""
    if a.p != b.p:
        raise PrimeMismatch(f"primes differ: {a.p} vs {b.p}")
    fa, fb = ulm_of_group(a), ulm_of_group(b)
    top = max([*fa, *fb, 0])
    for n in range(top + 1):
        if sum(c for k, c in fa.items() if k >= n) > sum(c for k, c in fb.items() if k >= n):
            return False
    return True


@dataclass(frozen=True)
class PGroupHom:
    """A homomorphism given by the images of the standard generators."""

    domain: FinitePGroup
    codomain: FinitePGroup
    images: tuple[Element, ...]

    def __post_init__(self):
        if len(self.images) != self.domain.rank:
            raise ValueError("one image per generator is required")
        for e, img in zip(self.domain.exponents, self.images):
            if self.codomain.scale(self.domain.p**e, img) != self.codomain.zero():
                raise ValueError(f"image {img} has order not dividing p^{e}")

    def __call__(self, x: Element) -> Element:
        out = self.codomain.zero()
        for c, img in zip(x, self.images):
            out = self.codomain.add(out, self.codomain.scale(c, img))
        return out

    def kernel(self) -> list[Element]:
        z = self.codomain.zero()
        return [x for x in self.domain.elements() if self(x) == z]

    def is_injective(self) -> bool:
        return len(self.kernel()) == 1

    def to_json(self) -> list[list[str]]:
        return [[str(c) for c in img] for img in self.images]


def _span_with(g: FinitePGroup, span: frozenset, s: Element) -> frozenset:
    """The F_p-span of ``span`` and the socle element ``s``."""
    multiples = [g.scale(c, s) for c in range(g.p)]
    return frozenset(g.add(x, y) for x in span for y in multiples)


def find_monomorphism(a: FinitePGroup, b: FinitePGroup) -> Optional[PGroupHom]:
    """Lexicographically first injective homomorphism ``A -> B``, or None.

    Depth-first over generator images in lexicographic order.  A hom is
    injective iff the socle images ``p^(e_i - 1) phi(g_i)`` are independent,
    and whether a partial assignment extends depends only on the span of
    those socle images, so failed (depth, span) states are memoized.
    """
    if a.p != b.p:
        raise PrimeMismatch(f"primes differ: {a.p} vs {b.p}")
    if a.order > MAX_SOURCE_ORDER or b.order > MAX_TARGET_ORDER:
        raise SearchSpaceTooLarge(f"search over |A|={a.order}, |B|={b.order} is too large")
    p = a.p
    elements = list(b.elements())
    zero = b.zero()
    candidates = {
        e: [(x, b.scale(p ** (e - 1), x)) for x in elements if b.scale(p**e, x) == zero]
        for e in set(a.exponents)
    }
    failed: set[tuple[int, frozenset]] = set()
    chosen: list[Element] = []

    def search(i: int, span: frozenset) -> bool:
        if i == a.rank:
            return True
        if (i, span) in failed:
            return False
        dead: set[Element] = set()
        for x, s in candidates[a.exponents[i]]:
            if s in span or s in dead:
                continue
            bigger = _span_with(b, span, s)
            chosen.append(x)
            if search(i + 1, bigger):
                return True
            chosen.pop()
            dead |= bigger
        failed.add((i, span))
        return False

    if not search(0, frozenset([zero])):
        return None
    return PGroupHom(a, b, tuple(chosen))


def _proper_submultisets(exps: tuple[int, ...]) -> list[tuple[int, ...]]:
    counts = sorted(Counter(exps).items(), reverse=True)
    out = []
    for choice in itertools.product(*(range(c + 1) for _, c in counts)):
        sub = tuple(e for (e, _), k in zip(counts, choice) for _ in range(k))
        if len(sub) < len(exps):
            out.append(sub)
    return sorted(out, reverse=True)


def bassian_finite_bruteforce(g: FinitePGroup) -> tuple[bool, dict]:
    """Search for a monomorphism from ``g`` into each proper direct summand.

    Proper summands are, up to isomorphism, the proper sub-multisets of the
    exponent multiset.
    """
    if g.order > MAX_SOURCE_ORDER:
        raise SearchSpaceTooLarge(f"|G|={g.order} exceeds {MAX_SOURCE_ORDER}")
    checked = []
    for sub in _proper_submultisets(g.exponents):
        target = FinitePGroup(g.p, sub)
        phi = find_monomorphism(g, target)
        if phi is not None:
            return False, {"summand": str(target), "monomorphism": phi.to_json()}
        checked.append(str(target))
    return True, {"summands_checked": checked}


def all_groups(p: int, max_total: int) -> list[FinitePGroup]:
    """Every group ``sum Z/p^e_i`` with ``sum e_i <= max_total`` (trivial included)."""

    def partitions(n: int, cap: int) -> Iterator[tuple[int, ...]]:
        if n == 0:
            yield ()
            return
        for first in range(min(n, cap), 0, -1):
            for rest in partitions(n - first, first):
                yield (first, *rest)

    return [FinitePGroup(p, parts) for n in range(max_total + 1) for parts in partitions(n, n)]


# -- descriptors for (possibly infinite) torsion groups ----------------------


@dataclass(frozen=True)
class PrimeData:
    """The p-component: Ulm multiplicities, unbounded tail, divisible rank."""

    ulm: Mapping[int, ExtNat] = field(default_factory=dict)
    unbounded_tail: bool = False
    prufer_rank: ExtNat = 0

    def __post_init__(self):
        cleaned = {}
        for n, v in dict(self.ulm).items():
            if n < 0:
                raise ValueError("Ulm indices are natural numbers")
            if v is not INFINITY and v < 0:
                raise ValueError("Ulm multiplicities are non-negative")
            if v != 0:
                cleaned[int(n)] = v
        object.__setattr__(self, "ulm", dict(sorted(cleaned.items())))

    def is_zero(self) -> bool:
        return not self.ulm and not self.unbounded_tail and self.prufer_rank == 0

    def summand_count(self) -> ExtNat:
        if self.unbounded_tail:
            return INFINITY
        total = self.prufer_rank
        for v in self.ulm.values():
            total = total + v
        return total

    def to_json(self) -> dict:
        return {
            "ulm": {str(n): format_extnat(v) for n, v in self.ulm.items()},
            "unbounded_tail": self.unbounded_tail,
            "prufer_rank": format_extnat(self.prufer_rank),
        }


@dataclass(frozen=True)
class TorsionDescriptor:
    """A direct sum over primes of cyclic and quasi-cyclic p-groups."""

    components: Mapping[int, PrimeData] = field(default_factory=dict)

    def __post_init__(self):
        for p in self.components:
            if not isprime(p):
                raise ValueError(f"{p} is not prime")
        nonzero = {p: d for p, d in sorted(self.components.items()) if not d.is_zero()}
        object.__setattr__(self, "components", nonzero)

    def is_zero(self) -> bool:
        return not self.components

    @classmethod
    def of_group(cls, g: FinitePGroup) -> "TorsionDescriptor":
        return cls({g.p: PrimeData(ulm_of_group(g))})

    def to_json(self) -> dict:
        return {str(p): d.to_json() for p, d in self.components.items()}


def _cohopfian_failure(d: PrimeData) -> Optional[dict]:
    infinite = [n for n, v in d.ulm.items() if v is INFINITY]
    if infinite:
        return {"kind": "infinite-ulm-multiplicity", "ulm_index": str(infinite[0])}
    if d.unbounded_tail:
        return {"kind": "unbounded-ulm-support"}
    if d.prufer_rank is INFINITY:
        return {"kind": "infinite-divisible-rank"}
    return None


def torsion_verdict(t: TorsionDescriptor) -> Verdict:
    """Decide the finiteness properties of a torsion group descriptor.

    A p-component is co-Hopfian exactly when it is finite plus divisible of
    finite rank; for p-groups Bassian-finite, co-Hopfian and relatively
    co-Hopfian coincide, and a torsion group has each property iff every
    p-component does.
    """
    failures = {p: _cohopfian_failure(d) for p, d in t.components.items()}
    bad = [(p, f) for p, f in failures.items() if f is not None]
    anchor = "p-groups: Bassian-finite <=> co-Hopfian <=> relatively co-Hopfian; decided per p-component"
    if bad:
        p, f = bad[0]
        witness = {"prime": str(p), **f}
        ch = Finding(Truth.FALSE, "torsion-cohopfian-rule", anchor, witness)
    else:
        ch = Finding(Truth.TRUE, "torsion-cohopfian-rule", anchor, {"primes": [str(p) for p in t.components]})

    omega = [
        (p, d) for p, d in t.components.items()
        if d.prufer_rank is INFINITY or any(v is INFINITY for v in d.ulm.values())
    ]
    if omega:
        df = Finding(Truth.FALSE, "omega-multiplicity", "X^(w) = X + X^(w)", {"prime": str(omega[0][0])})
    elif ch.value is Truth.TRUE:
        df = Finding(Truth.TRUE, "cohopfian-implies", "co-Hopfian => Dedekind-finite")
    else:
        df = Finding(Truth.UNDECIDED, "not-settled", "unbounded Ulm support with finite multiplicities")

    counts = [d.summand_count() for d in t.components.values()]
    total = sum(counts) if all(is_finite(c) for c in counts) else INFINITY
    indecomposable = is_finite(total) and total <= 1
    cbf = Finding(
        Truth.of(indecomposable),
        ("zero-group" if total == 0 else "indecomposable") if indecomposable else "decomposable",
        "co-Bassian-finite <=> indecomposable",
        {"summands": format_extnat(total)},
    )
    if t.is_zero():
        fir = Finding(Truth.TRUE, "zero-group", "the zero group")
        cfh = Finding(Truth.TRUE, "zero-group", "the zero group")
    else:
        fir = Finding(Truth.FALSE, "torsion-present", "finite injective rank forces torsion-free")
        cfh = Finding(Truth.UNDECIDED, "not-settled", "co-finite Hopficity only decided under finite injective rank")
    return Verdict(
        {
            "bassian_finite": ch,
            "dedekind_finite": df,
            "co_hopfian": ch,
            "relatively_co_hopfian": ch,
            "co_bassian_finite": cbf,
            "finite_injective_rank": fir,
            "co_finitely_hopfian": cfh,
        }
    )
