"""Characteristics, types, and completely decomposable torsion-free groups.

A characteristic assigns to every prime a height in ``N u {INFINITY}``.  The
ones handled here have a 0/INFINITY tail described by prime *indices*
(``p_0 = 2``) and finitely many explicit exceptions:

* ``const0`` / ``constInf``
* ``res(r,k)``: INFINITY iff ``index(p) mod 2**k != r``
* ``thr(N)``: INFINITY iff ``index(p) >= N``

Every tail's INFINITY-set is eventually periodic with a power-of-two
period, which makes type comparison decidable by scanning one period past
the largest threshold.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from sympy import isprime

from .arith import INFINITY, ExtNat, format_extnat, is_finite, nth_prime, prime_index
from .locnum import Word
from .report import Finding, Truth, Verdict

__all__ = [
    "ConstTail",
    "ResidueTail",
    "ThresholdTail",
    "Characteristic",
    "TypeDescriptor",
    "Order",
    "AscendingNest",
    "DescendingThreshold",
    "CDEntry",
    "CDDescriptor",
    "char_eval",
    "type_compare",
    "window_compare",
    "atc_holds",
    "cd_verdict",
    "parse_characteristic",
]

MAX_TAIL_BITS = 16


@dataclass(frozen=True)
class ConstTail:
    infinite: bool = False

    def infinite_at(self, i: int) -> bool:
        return self.infinite

    def shape(self) -> tuple[int, int]:
        return 0, 1

    def __str__(self) -> str:
        return "constInf" if self.infinite else "const0"


@dataclass(frozen=True)
class ResidueTail:
    r: int
    k: int

    def __post_init__(self):
        if not 0 <= self.k <= MAX_TAIL_BITS:
            raise ValueError(f"residue modulus exponent must lie in [0, {MAX_TAIL_BITS}], got {self.k}")
        if not 0 <= self.r < 2**self.k:
            raise ValueError(f"residue {self.r} out of range for modulus 2^{self.k}")

    def infinite_at(self, i: int) -> bool:
        return i % (1 << self.k) != self.r

    def shape(self) -> tuple[int, int]:
        return 0, 1 << self.k

    def __str__(self) -> str:
        return f"res({self.r},{self.k})"


@dataclass(frozen=True)
class ThresholdTail:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"threshold must be non-negative, got {self.n}")

    def infinite_at(self, i: int) -> bool:
        return i >= self.n

    def shape(self) -> tuple[int, int]:
        return self.n, 1

    def __str__(self) -> str:
        return f"thr({self.n})"


Tail = Union[ConstTail, ResidueTail, ThresholdTail]


@dataclass(frozen=True)
class Characteristic:
    """A height function on primes: a tail plus finitely many exceptions.

    ``exceptions`` is stored as a tuple of ``(prime, value)`` pairs sorted
    by prime; a mapping is accepted on construction.
    """

    tail: Tail = ConstTail(False)
    exceptions: tuple[tuple[int, ExtNat], ...] = ()

    def __post_init__(self):
        exc = self.exceptions
        items = exc.items() if isinstance(exc, Mapping) else exc
        normalized = {}
        for p, v in items:
            if not isprime(p):
                raise ValueError(f"exception key {p} is not prime")
            if not (v is INFINITY or (isinstance(v, int) and v >= 0)):
                raise ValueError(f"exception value at {p} must be a natural or INFINITY, got {v!r}")
            normalized[int(p)] = v
        object.__setattr__(self, "exceptions", tuple(sorted(normalized.items())))

    def __call__(self, p: int) -> ExtNat:
        return char_eval(self, p)

    def exception_map(self) -> dict[int, ExtNat]:
        return dict(self.exceptions)

    def __str__(self) -> str:
        text = str(self.tail)
        if self.exceptions:
            text += ";exc(" + ",".join(f"{p}={_fmt_height(v)}" for p, v in self.exceptions) + ")"
        return text

    @classmethod
    def parse(cls, text: str) -> "Characteristic":
        return parse_characteristic(text)


def _fmt_height(v: ExtNat) -> str:
    return "inf" if v is INFINITY else str(v)


def char_eval(chi: Characteristic, p: int) -> ExtNat:
    exc = chi.exception_map()
    if p in exc:
        return exc[p]
    return INFINITY if chi.tail.infinite_at(prime_index(p)) else 0


class Order(enum.Enum):
    LT = "LT"
    EQ = "EQ"
    GT = "GT"
    INCOMPARABLE = "INCOMPARABLE"


def _tail_excess(a: Tail, b: Tail) -> list[int] | None:
    """Indices where ``a`` is INFINITY and ``b`` is 0, or None if infinitely many."""
    na, pa = a.shape()
    nb, pb = b.shape()
    start, period = max(na, nb), max(pa, pb)
    for i in range(start, start + period):
        if a.infinite_at(i) and not b.infinite_at(i):
            return None
    return [i for i in range(start) if a.infinite_at(i) and not b.infinite_at(i)]


def _char_leq(x: Characteristic, y: Characteristic) -> bool:
    """Type of ``x`` <= type of ``y``.

    The primes where ``x`` exceeds ``y`` must be finite in number and ``x``
    must be finite there (so ``y`` can be raised by a finite amount).
    """
    excess = _tail_excess(x.tail, y.tail)
    if excess is None:
        return False
    exc_primes = set(x.exception_map()) | set(y.exception_map())
    exc_indices = {prime_index(p) for p in exc_primes}
    # off the exception primes, an excess index means INFINITY against 0
    if any(i not in exc_indices for i in excess):
        return False
    for p in exc_primes:
        vx, vy = char_eval(x, p), char_eval(y, p)
        if vx > vy and vx is INFINITY:
            return False
    return True


@dataclass(frozen=True)
class TypeDescriptor:
    """A type, represented by any characteristic in its class."""

    representative: Characteristic

    def compare(self, other: "TypeDescriptor") -> Order:
        return type_compare(self, other)

    def __le__(self, other: "TypeDescriptor") -> bool:
        return _char_leq(self.representative, other.representative)

    def equivalent(self, other: "TypeDescriptor") -> bool:
        return type_compare(self, other) is Order.EQ

    def __str__(self) -> str:
        return str(self.representative)


def _as_type(t: TypeDescriptor | Characteristic) -> TypeDescriptor:
    return t if isinstance(t, TypeDescriptor) else TypeDescriptor(t)


def type_compare(a: TypeDescriptor | Characteristic, b: TypeDescriptor | Characteristic) -> Order:
    a, b = _as_type(a), _as_type(b)
    le = _char_leq(a.representative, b.representative)
    ge = _char_leq(b.representative, a.representative)
    if le and ge:
        return Order.EQ
    if le:
        return Order.LT
    if ge:
        return Order.GT
    return Order.INCOMPARABLE


def window_compare(a: Characteristic, b: Characteristic, n_primes: int = 128) -> Order:
    """Pointwise comparison restricted to the first ``n_primes`` primes."""
    va = [char_eval(a, nth_prime(i)) for i in range(n_primes)]
    vb = [char_eval(b, nth_prime(i)) for i in range(n_primes)]
    le = all(x <= y for x, y in zip(va, vb))
    ge = all(x >= y for x, y in zip(va, vb))
    if le and ge:
        return Order.EQ
    if le:
        return Order.LT
    if ge:
        return Order.GT
    return Order.INCOMPARABLE


_CHAR_RE = re.compile(
    r"\s*(?:(const0|constInf)|res\(\s*(\d+)\s*,\s*(\d+)\s*\)|thr\(\s*(\d+)\s*\))"
    r"\s*(?:;\s*exc\(([^()]*)\))?\s*\Z"
)


def parse_characteristic(text: str) -> Characteristic:
    """Parse ``res(r,k)``, ``thr(N)``, ``const0`` or ``constInf``,
    optionally followed by ``;exc(p=v,...)`` with ``v`` a natural or ``inf``."""
    m = _CHAR_RE.match(text)
    if m is None:
        raise ValueError(f"malformed characteristic: {text!r}")
    const, r, k, thr, exc = m.groups()
    if const is not None:
        tail: Tail = ConstTail(const == "constInf")
    elif r is not None:
        tail = ResidueTail(int(r), int(k))
    else:
        tail = ThresholdTail(int(thr))
    exceptions: dict[int, ExtNat] = {}
    if exc is not None and exc.strip():
        for item in exc.split(","):
            key, sep, val = item.partition("=")
            key, val = key.strip(), val.strip()
            if not sep or not key.isdigit() or not (val.isdigit() or val == "inf"):
                raise ValueError(f"malformed exception entry {item!r}")
            p = int(key)
            if p in exceptions:
                raise ValueError(f"duplicate exception prime {p}")
            exceptions[p] = INFINITY if val == "inf" else int(val)
    return Characteristic(tail, exceptions)


# -- completely decomposable descriptors ------------------------------------


def idempotent_characteristic(w: Word) -> Characteristic:
    """Height profile of ``e_w``: INFINITY off ``P_w``, 0 on ``P_w``."""
    return Characteristic(ResidueTail(w.value, w.length))


@dataclass(frozen=True)
class AscendingNest:
    """Rank-1 summands of types ``tau(e_{0^i base})``, ``i = 0, 1, ...``."""

    base: Word

    def type_at(self, i: int) -> TypeDescriptor:
        return TypeDescriptor(idempotent_characteristic(Word("0" * i + self.base.bits)))


@dataclass(frozen=True)
class DescendingThreshold:
    """Rank-1 summands of types ``thr(start + i)``, ``i = 0, 1, ...``."""

    start: int

    def type_at(self, i: int) -> TypeDescriptor:
        return TypeDescriptor(Characteristic(ThresholdTail(self.start + i)))


ChainFamily = Union[AscendingNest, DescendingThreshold]


@dataclass(frozen=True)
class CDEntry:
    type: TypeDescriptor
    multiplicity: ExtNat = 1

    def __post_init__(self):
        if is_finite(self.multiplicity) and self.multiplicity < 1:
            raise ValueError("multiplicities must be >= 1")


@dataclass(frozen=True)
class CDDescriptor:
    entries: tuple[CDEntry, ...] = ()
    families: tuple[ChainFamily, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        object.__setattr__(self, "families", tuple(self.families))

    @property
    def rank(self) -> ExtNat:
        if self.families or any(not is_finite(e.multiplicity) for e in self.entries):
            return INFINITY
        return sum(e.multiplicity for e in self.entries)

    def is_zero(self) -> bool:
        return not self.entries and not self.families


def _sorted_entries(g: CDDescriptor) -> list[CDEntry]:
    return sorted(g.entries, key=lambda e: (str(e.type), format_extnat(e.multiplicity)))


def _sorted_families(g: CDDescriptor) -> list[ChainFamily]:
    return sorted(g.families, key=_family_label)


def _family_label(f: ChainFamily) -> str:
    if isinstance(f, AscendingNest):
        return f'AscChain("{f.base.bits}")'
    return f"DescChain({f.start})"


def _shift_scheme(f: AscendingNest, steps: int = 6) -> list[dict]:
    return [
        {
            "from": str(f.type_at(i)),
            "to": str(f.type_at(i + 1)),
            "compare": type_compare(f.type_at(i), f.type_at(i + 1)).value,
        }
        for i in range(steps)
    ]


def _atc_violation(g: CDDescriptor) -> dict | None:
    """Witness for an infinite ascending run of summand types, if any."""
    for e in _sorted_entries(g):
        if e.multiplicity is INFINITY:
            return {"kind": "infinite-multiplicity", "type": str(e.type)}
    for f in _sorted_families(g):
        if isinstance(f, AscendingNest):
            return {"kind": "ascending-family", "family": _family_label(f), "shift": _shift_scheme(f)}
    return None


def atc_holds(g: CDDescriptor) -> bool:
    """No infinite <=-ascending sequence of types over distinct summands."""
    return _atc_violation(g) is None


def _finite_height_prime(chi: Characteristic) -> int | None:
    """Some prime where ``chi`` is finite, or None if ``chi`` is INFINITY everywhere."""
    exc = chi.exception_map()
    for p, v in chi.exceptions:
        if v is not INFINITY:
            return p
    start, period = chi.tail.shape()
    for i in range(start + period * (len(exc) + 1)):
        p = nth_prime(i)
        if p not in exc and not chi.tail.infinite_at(i):
            return p
    return None


def cd_verdict(g: CDDescriptor) -> Verdict:
    """Decide the finiteness properties of a completely decomposable group."""
    violation = _atc_violation(g)
    atc = violation is None
    rank = g.rank
    finite_rank = is_finite(rank)

    if atc:
        bf = Finding(Truth.TRUE, "ascending-type-condition", "completely decomposable: ATC <=> Bassian-finite")
        rch = Finding(Truth.TRUE, "ascending-type-condition", "completely decomposable: ATC <=> relatively co-Hopfian")
    else:
        bf = Finding(Truth.FALSE, "ascending-type-condition", "completely decomposable: ATC <=> Bassian-finite", violation)
        rch = Finding(Truth.FALSE, "ascending-type-condition", "completely decomposable: ATC <=> relatively co-Hopfian", violation)

    omega = [e for e in _sorted_entries(g) if e.multiplicity is INFINITY]
    if omega:
        df = Finding(Truth.FALSE, "omega-multiplicity", "X^(w) = X + X^(w)", {"type": str(omega[0].type)})
    else:
        df = Finding(Truth.TRUE, "finite-type-multiplicities", "type multiplicities are isomorphism invariants")

    if finite_rank:
        fir = Finding(Truth.TRUE, "finite-rank", "completely decomposable: finite injective rank <=> finite rank", {"rank": str(rank)})
    else:
        fir = Finding(Truth.FALSE, "infinite-direct-sum", "infinite direct sums never have finite injective rank")

    divisible = all(_finite_height_prime(e.type.representative) is None for e in g.entries) and not g.families
    if omega:
        ch = Finding(Truth.FALSE, "omega-multiplicity", "X^(w) = X + X^(w)", {"type": str(omega[0].type)})
    elif divisible and finite_rank:
        ch = Finding(Truth.TRUE, "divisible-finite-rank", "Q^n is co-Hopfian")
    elif divisible:
        ch = Finding(Truth.FALSE, "divisible-infinite-rank", "Q^(w) = Q + Q^(w)")
    else:
        ch = Finding(Truth.FALSE, "multiplication-by-p", "p acts injectively but not surjectively", _non_divisible_witness(g))

    indecomposable = finite_rank and rank <= 1
    cbf = Finding(
        Truth.of(indecomposable),
        ("zero-group" if rank == 0 else "indecomposable") if indecomposable else "decomposable",
        "co-Bassian-finite <=> indecomposable",
        {"rank": format_extnat(rank)},
    )

    if fir.value is Truth.TRUE:
        cfh = Finding(Truth.of(divisible), "finite-injective-rank-divisibility", "finite injective rank: co-finitely Hopfian <=> divisible of finite rank")
    else:
        cfh = Finding(Truth.UNDECIDED, "not-settled", "co-finite Hopficity only decided under finite injective rank")

    return Verdict(
        {
            "bassian_finite": bf,
            "dedekind_finite": df,
            "co_hopfian": ch,
            "relatively_co_hopfian": rch,
            "co_bassian_finite": cbf,
            "finite_injective_rank": fir,
            "co_finitely_hopfian": cfh,
        }
    )


def _non_divisible_witness(g: CDDescriptor) -> dict:
    for e in _sorted_entries(g):
        p = _finite_height_prime(e.type.representative)
        if p is not None:
            return {"summand_type": str(e.type), "prime": str(p)}
    f = _sorted_families(g)[0]
    t = f.type_at(1)
    return {"summand_type": str(t), "prime": str(_finite_height_prime(t.representative))}


def cd_from_types(types: Iterable[tuple[Characteristic, ExtNat]], families: Iterable[ChainFamily] = ()) -> CDDescriptor:
    return CDDescriptor(tuple(CDEntry(TypeDescriptor(c), m) for c, m in types), tuple(families))
