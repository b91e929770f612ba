"""Binary words, residue classes of prime indices, and the localizations Q_w.

A word ``w`` of length ``k`` selects the residue class
``L_w = {n : n = value(w) mod 2**k}`` of prime indices, hence the prime
set ``P_w = {p_n : n in L_w}``.  ``Q_w`` is the subring of the rationals
whose denominators avoid ``P_w``; its primes are exactly ``P_w``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import INFINITY, ExtNat, prime_factors, prime_index, valuation

__all__ = [
    "Word",
    "EMPTY",
    "LengthExceeded",
    "NotInRing",
    "Localization",
    "prepend",
    "in_L",
    "in_P",
    "suffix_restrict",
    "in_Qw",
    "unit_in_Qw",
    "coker_order_Qw",
    "split_rational",
    "words_of_length",
]


class LengthExceeded(ValueError):
    pass


class NotInRing(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Word:
    """A finite bit string; ``Word("0110") != Word("110")``."""

    bits: str = ""

    def __post_init__(self):
        if not isinstance(self.bits, str) or any(c not in "01" for c in self.bits):
            raise ValueError(f"a word is a string over {{0,1}}, got {self.bits!r}")

    @property
    def length(self) -> int:
        return len(self.bits)

    @property
    def value(self) -> int:
        return int(self.bits, 2) if self.bits else 0

    @classmethod
    def from_value(cls, value: int, length: int) -> "Word":
        if not 0 <= value < 2**length:
            raise ValueError(f"{value} does not fit in {length} bits")
        return cls(format(value, f"0{length}b") if length else "")

    def display(self) -> str:
        return self.bits or "∅"

    def __str__(self) -> str:
        return self.bits

    def __len__(self) -> int:
        return len(self.bits)


EMPTY = Word("")


def _word(w: Word | str) -> Word:
    return w if isinstance(w, Word) else Word(w)


def words_of_length(n: int) -> list[Word]:
    """All ``2**n`` words of length ``n``, ordered by value."""
    return [Word.from_value(v, n) for v in range(2**n)]


def prepend(bit: int, w: Word | str) -> Word:
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    return Word(str(bit) + _word(w).bits)


def in_L(w: Word | str, n: int) -> bool:
    w = _word(w)
    return n % (1 << w.length) == w.value


def in_P(w: Word | str, p: int) -> bool:
    """Whether the prime ``p`` belongs to ``P_w``."""
    return in_L(w, prime_index(p))


def suffix_restrict(v: Word | str, n: int) -> Word:
    """The length-``n`` suffix of ``v``."""
    v = _word(v)
    if n < 0 or n > v.length:
        raise LengthExceeded(f"cannot restrict a word of length {v.length} to {n}")
    return Word(v.bits[v.length - n:])


@dataclass(frozen=True)
class Localization:
    """The ring ``Q_w``: membership, units and quotient orders."""

    word: Word = EMPTY

    def __post_init__(self):
        object.__setattr__(self, "word", _word(self.word))

    def has_prime(self, p: int) -> bool:
        return in_P(self.word, p)

    def contains(self, q: Fraction | int) -> bool:
        q = Fraction(q)
        return not any(self.has_prime(p) for p in prime_factors(q.denominator))

    def is_unit(self, q: Fraction | int) -> bool:
        q = Fraction(q)
        if not self.contains(q):
            raise NotInRing(f"{q} is not in Q_{self.word.display()}")
        if q == 0:
            return False
        return not any(self.has_prime(p) for p in prime_factors(q.numerator))

    def coker_order(self, q: Fraction | int) -> ExtNat:
        """``|Q_w / q Q_w|``."""
        q = Fraction(q)
        if not self.contains(q):
            raise NotInRing(f"{q} is not in Q_{self.word.display()}")
        if q == 0:
            return INFINITY
        order = 1
        for p in prime_factors(q.numerator):
            if self.has_prime(p):
                order *= p ** valuation(q, p)
        return order


def in_Qw(q: Fraction | int, w: Word | str) -> bool:
    return Localization(_word(w)).contains(q)


def unit_in_Qw(q: Fraction | int, w: Word | str) -> bool:
    return Localization(_word(w)).is_unit(q)


def coker_order_Qw(q: Fraction | int, w: Word | str) -> ExtNat:
    return Localization(_word(w)).coker_order(q)


def split_rational(q: Fraction | int, w: Word | str) -> tuple[Fraction, Fraction]:
    """Write ``q = q0 + q1`` with ``q0`` in ``Q_{0w}`` and ``q1`` in ``Q_{1w}``.

    The denominator ``b`` factors as ``b0 * b1`` with ``b0`` carrying exactly
    the primes of ``P_{0w}``.  With ``u*b1 + v*b0 = 1`` and ``0 <= u < b0``
    we return ``(a*v/b1, a*u/b0)``.
    """
    q = Fraction(q)
    w0 = prepend(0, w)
    a, b = q.numerator, q.denominator
    b0 = 1
    for p in prime_factors(b):
        if in_P(w0, p):
            b0 *= p ** valuation(b, p)
    if b0 == 1:
        return q, Fraction(0)
    b1 = b // b0
    u = pow(b1, -1, b0)
    v = (1 - u * b1) // b0
    return Fraction(a * v, b1), Fraction(a * u, b0)
