"""The direct-limit ring R = union of R_n, with R_n = sum of Q_w e_w over |w| = n.

An element at level ``n`` is a dense tuple of ``2**n`` rationals indexed by
word value (for a fixed length, value order is lexicographic order).  The
inclusion ``R_n -> R_{n+1}`` sends ``e_w`` to ``e_{0w} + e_{1w}``, so the
coefficient of a word ``v`` at a finer level is the coefficient of its
suffix, i.e. of ``value(v) mod 2**n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Mapping

from sympy.ntheory.modular import crt

from .arith import INFINITY, ExtNat, format_rational, parse_rational, prime_factors, valuation
from .locnum import Localization, NotInRing, Word, in_P, in_Qw, words_of_length
from .typesys import Characteristic, idempotent_characteristic

__all__ = [
    "MAX_LEVEL",
    "RingElement",
    "MultClassification",
    "InvalidCoefficient",
    "MissingWord",
    "LevelTooSmall",
    "InvalidLevel",
    "NotIdempotent",
    "ZeroElement",
    "NotUnit",
    "NotDivisible",
    "element_new",
    "basis_idempotent",
    "refine",
    "canonicalize",
    "ring_add",
    "ring_sub",
    "ring_neg",
    "ring_mul",
    "ring_inverse",
    "ring_solve",
    "classify_mult",
    "coker_order",
    "split_idempotent",
    "divide_mod",
    "divide_mod_z",
    "char_of_idempotent",
    "ONE",
    "ZERO",
]

MAX_LEVEL = 16


class InvalidCoefficient(NotInRing):
    def __init__(self, word: Word, coeff: Fraction):
        super().__init__(f"coefficient {coeff} at word {word.display()} is not in Q_{word.display()}")
        self.word = word


class MissingWord(ValueError):
    pass


class LevelTooSmall(ValueError):
    pass


class InvalidLevel(ValueError):
    pass


class NotIdempotent(ValueError):
    pass


class ZeroElement(ValueError):
    pass


class NotUnit(ArithmeticError):
    pass


class NotDivisible(ArithmeticError):
    pass


def _check_level(n: int) -> None:
    if not isinstance(n, int) or n < 0:
        raise InvalidLevel(f"level must be a natural number, got {n!r}")
    if n > MAX_LEVEL:
        raise InvalidLevel(f"level {n} exceeds the supported maximum {MAX_LEVEL}")


@dataclass(frozen=True, eq=False)
class RingElement:
    """An element of R presented at a given level.

    Equality is equality in R: representatives at different levels compare
    equal when their refinements agree.
    """

    level: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        _check_level(self.level)
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if len(coeffs) != 1 << self.level:
            raise MissingWord(f"level {self.level} needs {1 << self.level} coefficients, got {len(coeffs)}")
        for j, c in enumerate(coeffs):
            if c.denominator != 1 and not in_Qw(c, Word.from_value(j, self.level)):
                raise InvalidCoefficient(Word.from_value(j, self.level), c)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def _trusted(cls, level: int, coeffs: tuple[Fraction, ...]) -> "RingElement":
        obj = object.__new__(cls)
        object.__setattr__(obj, "level", level)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    @classmethod
    def integer(cls, n: int) -> "RingElement":
        return cls._trusted(0, (Fraction(n),))

    def coeff(self, w: Word | str) -> Fraction:
        w = w if isinstance(w, Word) else Word(w)
        if w.length != self.level:
            raise ValueError(f"word {w.display()} does not have length {self.level}")
        return self.coeffs[w.value]

    def items(self) -> list[tuple[Word, Fraction]]:
        return [(Word.from_value(j, self.level), c) for j, c in enumerate(self.coeffs)]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = RingElement.integer(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        n = max(self.level, other.level)
        return _refined(self, n) == _refined(other, n)

    def __hash__(self) -> int:
        c = canonicalize(self)
        return hash((c.level, c.coeffs))

    def __add__(self, other: "RingElement | int") -> "RingElement":
        return ring_add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other: "RingElement | int") -> "RingElement":
        return ring_sub(self, _coerce(other))

    def __rsub__(self, other: "RingElement | int") -> "RingElement":
        return ring_sub(_coerce(other), self)

    def __neg__(self) -> "RingElement":
        return ring_neg(self)

    def __mul__(self, other: "RingElement | int") -> "RingElement":
        return ring_mul(self, _coerce(other))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        terms = [f"{format_rational(c)}*e[{w.display()}]" for w, c in self.items() if c]
        return f"RingElement(level={self.level}: {' + '.join(terms) or '0'})"

    def to_json(self) -> dict:
        c = canonicalize(self)
        return {"level": c.level, "coeffs": {w.bits: format_rational(q) for w, q in c.items() if q}}

    @classmethod
    def from_json(cls, obj: Any) -> "RingElement":
        """Parse ``{"level": n, "coeffs": {"<word>": "<rational>", ...}}``;
        absent words mean coefficient 0."""
        if not isinstance(obj, Mapping) or set(obj) - {"level", "coeffs"} or "level" not in obj:
            raise ValueError('element JSON must be an object with keys "level" and "coeffs"')
        level = obj["level"]
        if isinstance(level, bool) or not isinstance(level, int):
            raise ValueError("level must be an integer")
        _check_level(level)
        raw = obj.get("coeffs", {})
        if not isinstance(raw, Mapping):
            raise ValueError("coeffs must be an object")
        coeffs = [Fraction(0)] * (1 << level)
        for key, val in raw.items():
            w = Word(key)
            if w.length != level:
                raise MissingWord(f"word {key!r} does not have length {level}")
            if isinstance(val, bool) or not isinstance(val, (str, int)):
                raise ValueError(f"coefficient for {key!r} must be a string or integer")
            coeffs[w.value] = parse_rational(val) if isinstance(val, str) else Fraction(val)
        return cls(level, tuple(coeffs))


ZERO = RingElement._trusted(0, (Fraction(0),))
ONE = RingElement._trusted(0, (Fraction(1),))


def _coerce(x: "RingElement | int") -> RingElement:
    if isinstance(x, RingElement):
        return x
    if isinstance(x, int):
        return RingElement.integer(x)
    raise TypeError(f"cannot use {type(x).__name__} as an element of R")


def element_new(level: int, coeffs: Mapping[Word | str, Fraction | int | str]) -> RingElement:
    """Build a validated element from a complete word -> coefficient map."""
    _check_level(level)
    keyed = {}
    for key, val in coeffs.items():
        w = key if isinstance(key, Word) else Word(key)
        keyed[w] = parse_rational(val) if isinstance(val, str) else Fraction(val)
    expected = set(words_of_length(level))
    if set(keyed) != expected:
        missing = sorted(w.display() for w in expected - set(keyed))
        extra = sorted(w.display() for w in set(keyed) - expected)
        raise MissingWord(f"level {level} key set mismatch: missing={missing} unexpected={extra}")
    return RingElement(level, tuple(keyed[w] for w in words_of_length(level)))


def basis_idempotent(w: Word | str) -> RingElement:
    w = w if isinstance(w, Word) else Word(w)
    _check_level(w.length)
    coeffs = [Fraction(0)] * (1 << w.length)
    coeffs[w.value] = Fraction(1)
    return RingElement._trusted(w.length, tuple(coeffs))


def _refined(x: RingElement, m: int) -> tuple[Fraction, ...]:
    mask = (1 << x.level) - 1
    return tuple(x.coeffs[j & mask] for j in range(1 << m))


def refine(x: RingElement, m: int) -> RingElement:
    if m < x.level:
        raise LevelTooSmall(f"cannot refine level {x.level} down to {m}")
    _check_level(m)
    return RingElement._trusted(m, _refined(x, m))


def canonicalize(x: RingElement) -> RingElement:
    """The equal element of minimal level."""
    level, coeffs = x.level, x.coeffs
    while level > 0:
        half = 1 << (level - 1)
        if coeffs[:half] != coeffs[half:]:
            break
        coeffs = coeffs[:half]
        level -= 1
    if level == x.level:
        return x
    return RingElement._trusted(level, coeffs)


def _combine(x: RingElement, y: RingElement, op) -> RingElement:
    n = max(x.level, y.level)
    a, b = _refined(x, n), _refined(y, n)
    return canonicalize(RingElement._trusted(n, tuple(op(s, t) for s, t in zip(a, b))))


def ring_add(x: RingElement, y: RingElement) -> RingElement:
    return _combine(x, y, lambda s, t: s + t)


def ring_sub(x: RingElement, y: RingElement) -> RingElement:
    return _combine(x, y, lambda s, t: s - t)


def ring_mul(x: RingElement, y: RingElement) -> RingElement:
    return _combine(x, y, lambda s, t: s * t)


def ring_neg(x: RingElement) -> RingElement:
    return RingElement._trusted(x.level, tuple(-c for c in x.coeffs))


@dataclass(frozen=True)
class MultClassification:
    """Properties of the multiplication map ``x -> alpha * x`` on R."""

    is_zero: bool
    is_zero_divisor: bool
    is_injective: bool
    is_unit: bool
    is_idempotent: bool

    def to_json(self) -> dict:
        return {
            "is_zero": self.is_zero,
            "is_zero_divisor": self.is_zero_divisor,
            "is_injective": self.is_injective,
            "is_unit": self.is_unit,
            "is_idempotent": self.is_idempotent,
        }


def classify_mult(alpha: RingElement) -> MultClassification:
    c = canonicalize(alpha)
    slots = c.items()
    is_zero = c.is_zero()
    has_zero = any(g == 0 for _, g in slots)
    return MultClassification(
        is_zero=is_zero,
        is_zero_divisor=has_zero,
        is_injective=not has_zero,
        is_unit=not has_zero and all(Localization(w).is_unit(g) for w, g in slots),
        is_idempotent=all(g in (0, 1) for _, g in slots),
    )


def coker_order(alpha: RingElement) -> ExtNat:
    """``|R / alpha R|``, the product of the slot quotients ``|Q_w / gamma_w Q_w|``."""
    c = canonicalize(alpha)
    order = 1
    for w, g in c.items():
        slot = Localization(w).coker_order(g)
        if slot is INFINITY:
            return INFINITY
        order *= slot
    return order


def ring_inverse(alpha: RingElement) -> RingElement:
    if not classify_mult(alpha).is_unit:
        raise NotUnit(f"{alpha!r} is not a unit of R")
    c = canonicalize(alpha)
    return RingElement._trusted(c.level, tuple(1 / g for g in c.coeffs))


def ring_solve(alpha: RingElement, target: RingElement) -> RingElement:
    """Return ``y`` with ``alpha * y == target``, raising NotDivisible if none exists."""
    n = max(alpha.level, target.level)
    a, t = _refined(alpha, n), _refined(target, n)
    out = []
    for j, (g, s) in enumerate(zip(a, t)):
        w = Word.from_value(j, n)
        if g == 0:
            if s != 0:
                raise NotDivisible(f"slot {w.display()}: zero coefficient cannot reach {s}")
            out.append(Fraction(0))
            continue
        q = s / g
        if not in_Qw(q, w):
            raise NotDivisible(f"slot {w.display()}: {s}/{g} is not in Q_{w.display()}")
        out.append(q)
    return canonicalize(RingElement._trusted(n, tuple(out)))


def split_idempotent(eps: RingElement) -> tuple[RingElement, RingElement]:
    """Write a nonzero idempotent as a sum of two orthogonal nonzero idempotents.

    With at least two words in the canonical support, split off the least
    one; a single-word support ``w`` refines to ``(e_{0w}, e_{1w})``.
    """
    cls = classify_mult(eps)
    if not cls.is_idempotent:
        raise NotIdempotent(f"{eps!r} is not idempotent")
    if cls.is_zero:
        raise ZeroElement("zero has no nontrivial splitting")
    c = canonicalize(eps)
    support = [w for w, g in c.items() if g == 1]
    if len(support) >= 2:
        first = basis_idempotent(support[0])
        return first, ring_sub(c, first)
    w = support[0]
    return basis_idempotent(Word("0" + w.bits)), basis_idempotent(Word("1" + w.bits))


def _residue(q: Fraction, modulus: int) -> int:
    return q.numerator * pow(q.denominator, -1, modulus) % modulus


def divide_mod(x: RingElement, m: int) -> RingElement:
    """One-level division: ``y`` at ``level(x)`` with ``m*y - x`` one level down.

    For each word ``w`` one level down the common defect ``c_w`` must make
    ``(c_w + x_{0w})/m`` lie in ``Q_{0w}`` and ``(c_w + x_{1w})/m`` in
    ``Q_{1w}``; these are congruences at the primes of ``m`` in ``P_w``.
    The defect is the integer solution of least absolute value, ties going
    to the positive one.
    """
    if m < 1:
        raise ValueError(f"divisor must be a positive integer, got {m}")
    n = x.level
    if n == 0:
        raise InvalidLevel("divide_mod needs an element of level >= 1")
    half = 1 << (n - 1)
    out = [Fraction(0)] * (1 << n)
    for j in range(half):
        w = Word.from_value(j, n - 1)
        moduli, residues = [], []
        for p in prime_factors(m):
            if not in_P(w, p):
                continue
            k = valuation(m, p)
            side = x.coeffs[j] if in_P(Word("0" + w.bits), p) else x.coeffs[j + half]
            moduli.append(p**k)
            residues.append(_residue(-side, p**k))
        if moduli:
            t, big_m = (int(v) for v in crt(moduli, residues))
            c = t if t <= big_m - t else t - big_m
        else:
            c = 0
        out[j] = (c + x.coeffs[j]) / m
        out[j + half] = (c + x.coeffs[j + half]) / m
    return RingElement(n, tuple(out))


def divide_mod_z(x: RingElement, m: int) -> tuple[RingElement, int, list[int]]:
    """Iterate :func:`divide_mod` until the defect lands in ``R_0 = Z``.

    Returns ``(y, k, levels)`` with ``m*y - x == k`` and ``levels`` the
    strictly decreasing canonical levels of the intermediate defects.
    """
    y = ZERO
    defect = canonicalize(ring_neg(x))
    levels = [defect.level]
    while defect.level > 0:
        z = divide_mod(defect, m)
        y = ring_sub(y, z)
        defect = canonicalize(ring_sub(defect, ring_mul(RingElement.integer(m), z)))
        levels.append(defect.level)
    return y, int(defect.coeffs[0]), levels


def char_of_idempotent(w: Word | str) -> Characteristic:
    """Characteristic of ``e_w`` in R: INFINITY at primes off ``P_w``, 0 on ``P_w``."""
    w = w if isinstance(w, Word) else Word(w)
    return idempotent_characteristic(w)
