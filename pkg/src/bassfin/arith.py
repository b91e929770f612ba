"""Exact integers, rationals, prime indexing and p-adic valuations.

Rationals are :class:`fractions.Fraction` values (always in lowest terms,
zero is ``0/1``).  Extended naturals are plain ``int`` values or the
:data:`INFINITY` singleton.
"""

from __future__ import annotations

import functools
import re
from fractions import Fraction
from typing import Union

from sympy import factorint, isprime, sieve

__all__ = [
    "INFINITY",
    "ExtNat",
    "NotPrime",
    "ZeroArgument",
    "nth_prime",
    "prime_index",
    "valuation",
    "prime_factors",
    "parse_rational",
    "format_rational",
    "parse_extnat",
    "format_extnat",
    "is_finite",
]


class NotPrime(ValueError):
    pass


class ZeroArgument(ValueError):
    pass


@functools.total_ordering
class _Infinity:
    """The top element of the extended naturals."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __eq__(self, other: object) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("INFINITY")

    def __lt__(self, other: object) -> bool:
        if other is self or isinstance(other, int):
            return False
        return NotImplemented

    def __gt__(self, other: object) -> bool:
        if other is self:
            return False
        if isinstance(other, int):
            return True
        return NotImplemented

    def __add__(self, other: "ExtNat") -> "_Infinity":
        return self

    __radd__ = __add__

    def __mul__(self, other: "ExtNat") -> "ExtNat":
        # multiplicities are >= 1 wherever this is used; 0 * inf = 0 anyway
        return 0 if other == 0 else self

    __rmul__ = __mul__

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()
ExtNat = Union[int, _Infinity]


def is_finite(x: ExtNat) -> bool:
    return x is not INFINITY


def nth_prime(i: int) -> int:
    """Return the ``i``-th prime, counting ``2`` as index 0."""
    if i < 0:
        raise ValueError(f"prime index must be non-negative, got {i}")
    sieve.extend_to_no(i + 1)
    return int(sieve[i + 1])


@functools.lru_cache(maxsize=4096)
def prime_index(p: int) -> int:
    """Inverse of :func:`nth_prime`."""
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    sieve.extend(p)
    return int(sieve.search(p)[0]) - 1


def valuation(q: Fraction | int, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    q = Fraction(q)
    if q == 0:
        raise ZeroArgument("valuation of zero is undefined")
    v = 0
    a, b = abs(q.numerator), q.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


@functools.lru_cache(maxsize=65536)
def prime_factors(n: int) -> tuple[int, ...]:
    """Sorted distinct prime divisors of ``|n|`` (empty for 0 and +-1)."""
    n = abs(n)
    if n < 2:
        return ()
    return tuple(sorted(factorint(n)))


_RATIONAL_RE = re.compile(r"\s*(-?\d+)(?:\s*/\s*(\d+))?\s*\Z")


def parse_rational(text: str) -> Fraction:
    """Parse ``"a"`` or ``"a/b"``; the sign may only sit on the numerator."""
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"not a rational: {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ZeroDivisionError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def format_rational(q: Fraction | int) -> str:
    return str(Fraction(q))


def parse_extnat(text: str) -> ExtNat:
    t = text.strip()
    if t in ("INFINITY", "inf", "w"):
        return INFINITY
    if not t.isdigit():
        raise ValueError(f"not an extended natural: {text!r}")
    return int(t)


def format_extnat(x: ExtNat) -> str:
    return "INFINITY" if x is INFINITY else str(x)
