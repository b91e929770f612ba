"""Recursive-descent parsers for group expressions and ring expressions.

Group grammar (whitespace is insignificant between tokens)::

    expr  := term ('+' term)*
    term  := atom ('^' mult)?
    mult  := natural >= 1 | 'w'
    atom  := 'C(' p ',' e ')' | 'Prufer(' p ')' | 'Z' | 'Q' | 'R1(' char ')'
           | 'AscChain("' word '")' | 'DescChain(' n ')' | 'UlmTail(' p ')'
           | 'ARRing' | '(' expr ')'
    char  := tail (';' 'exc(' [prime '=' (n | 'inf') (',' ...)*] ')')?
    tail  := 'const0' | 'constInf' | 'res(' r ',' k ')' | 'thr(' n ')'

Ring grammar, used by ``ring eval``::

    rexpr := rterm (('+' | '-') rterm)*
    rterm := rfact ('*' rfact)*
    rfact := '-' rfact | int ('/' int)? | 'e(' '"' word '"' ')' | '(' rexpr ')'
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from sympy import isprime

from .arith import INFINITY, ExtNat
from .arring import MAX_LEVEL, RingElement, basis_idempotent, ring_add, ring_mul, ring_neg, ring_sub
from .locnum import Word
from .typesys import MAX_TAIL_BITS, Characteristic, ConstTail, ResidueTail, ThresholdTail, Tail
from .verdict import (
    ARRing,
    AscChain,
    Atom,
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
)

__all__ = [
    "DSLError",
    "ParseError",
    "SemanticError",
    "MAX_NUMBER",
    "MAX_DEPTH",
    "parse_group_expr",
    "serialize",
    "parse_ring_expr",
]

MAX_NUMBER = 10**6
MAX_DEPTH = 64
_MAX_DIGITS = 40


class DSLError(ValueError):
    def __init__(self, position: int, message: str):
        self.position = position
        super().__init__(f"at position {position}: {message}")


class ParseError(DSLError):
    def __init__(self, position: int, expected: Iterable[str], found: str):
        self.expected = frozenset(expected)
        shown = ", ".join(repr(t) for t in sorted(self.expected))
        super().__init__(position, f"expected one of {shown}, found {found}")


class SemanticError(DSLError):
    pass


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.depth = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _found(self) -> str:
        if self.pos >= len(self.text):
            return "end of input"
        return repr(self.text[self.pos])

    def fail(self, *expected: str) -> ParseError:
        return ParseError(self.pos, expected, self._found())

    def fail_ident(self, start: int, name: str, expected: Iterable[str]) -> ParseError:
        self.pos = start
        if name:
            return ParseError(start, expected, f"identifier {name!r}")
        return ParseError(start, expected, self._found())

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self, literal: str) -> bool:
        self.skip_ws()
        return self.text.startswith(literal, self.pos)

    def accept(self, literal: str) -> bool:
        if self.peek(literal):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal: str) -> None:
        if not self.accept(literal):
            raise self.fail(literal)

    def ident(self) -> tuple[int, str]:
        self.skip_ws()
        start = self.pos
        if not (self.text[start:start + 1].isascii() and self.text[start:start + 1].isalpha()):
            return start, ""
        while self.pos < len(self.text) and self.text[self.pos].isascii() and self.text[self.pos].isalnum():
            self.pos += 1
        return start, self.text[start:self.pos]

    def natural(self, what: str = "natural number") -> tuple[int, int]:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and "0" <= self.text[self.pos] <= "9":
            self.pos += 1
        if self.pos == start:
            raise self.fail(what)
        if self.pos - start > _MAX_DIGITS:
            raise SemanticError(start, f"{what} has too many digits")
        return start, int(self.text[start:self.pos])

    def bounded(self, what: str, lo: int = 0) -> tuple[int, int]:
        start, n = self.natural(what)
        if n < lo or n > MAX_NUMBER:
            raise SemanticError(start, f"{what} must lie in [{lo}, {MAX_NUMBER}], got {n}")
        return start, n

    def prime(self) -> int:
        start, p = self.natural("prime")
        if p > MAX_NUMBER:
            raise SemanticError(start, f"prime {p} exceeds the supported bound {MAX_NUMBER}")
        if not isprime(p):
            raise SemanticError(start, f"{p} is not prime")
        return p

    def word(self) -> Word:
        self.expect('"')
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in "01":
            self.pos += 1
        bits = self.text[start:self.pos]
        if self.pos >= len(self.text) or self.text[self.pos] != '"':
            raise ParseError(self.pos, {"0", "1", '"'}, self._found())
        self.pos += 1
        if len(bits) > MAX_LEVEL:
            raise SemanticError(start, f"word length {len(bits)} exceeds {MAX_LEVEL}")
        return Word(bits)


# -- group expressions -------------------------------------------------------

_ATOM_START = ("C(", "Prufer(", "Z", "Q", "R1(", "AscChain(", "DescChain(", "UlmTail(", "ARRing", "(")


def _parse_tail(s: _Scanner) -> Tail:
    start, name = s.ident()
    if name == "const0":
        return ConstTail(False)
    if name == "constInf":
        return ConstTail(True)
    if name == "res":
        s.expect("(")
        rpos, r = s.bounded("residue")
        s.expect(",")
        kpos, k = s.bounded("modulus exponent")
        s.expect(")")
        if k > MAX_TAIL_BITS:
            raise SemanticError(kpos, f"modulus exponent must be <= {MAX_TAIL_BITS}")
        if r >= 1 << k:
            raise SemanticError(rpos, f"residue {r} out of range for modulus 2^{k}")
        return ResidueTail(r, k)
    if name == "thr":
        s.expect("(")
        _, n = s.bounded("threshold")
        s.expect(")")
        return ThresholdTail(n)
    raise s.fail_ident(start, name, ("const0", "constInf", "res(", "thr("))


def _parse_char(s: _Scanner) -> Characteristic:
    tail = _parse_tail(s)
    exceptions: dict[int, ExtNat] = {}
    if s.accept(";"):
        s.expect("exc(")
        if not s.peek(")"):
            while True:
                s.skip_ws()
                ppos = s.pos
                p = s.prime()
                if p in exceptions:
                    raise SemanticError(ppos, f"duplicate exception prime {p}")
                s.expect("=")
                if s.accept("inf"):
                    exceptions[p] = INFINITY
                else:
                    _, v = s.bounded("height")
                    exceptions[p] = v
                if not s.accept(","):
                    break
        s.expect(")")
    return Characteristic(tail, exceptions)


def _parse_atom(s: _Scanner) -> Atom:
    if s.accept("("):
        s.depth += 1
        if s.depth > MAX_DEPTH:
            raise SemanticError(s.pos - 1, f"parentheses nested deeper than {MAX_DEPTH}")
        inner = _parse_expr(s)
        s.expect(")")
        s.depth -= 1
        return Group(inner)
    start, name = s.ident()
    if name == "Z":
        return Integers()
    if name == "Q":
        return Rationals()
    if name == "ARRing":
        return ARRing()
    if name in ("C", "Prufer", "R1", "Rank1", "AscChain", "DescChain", "UlmTail"):
        s.expect("(")
        if name == "C":
            p = s.prime()
            s.expect(",")
            _, e = s.bounded("exponent", lo=1)
            atom: Atom = Cyclic(p, e)
        elif name == "Prufer":
            atom = Prufer(s.prime())
        elif name == "UlmTail":
            atom = UlmTail(s.prime())
        elif name == "DescChain":
            atom = DescChain(s.bounded("threshold")[1])
        elif name == "AscChain":
            atom = AscChain(s.word())
        else:
            atom = Rank1(_parse_char(s))
        s.expect(")")
        return atom
    raise s.fail_ident(start, name, _ATOM_START)


def _parse_term(s: _Scanner) -> Term:
    atom = _parse_atom(s)
    mult: ExtNat = 1
    if s.accept("^"):
        if s.accept("w"):
            mult = INFINITY
        else:
            s.skip_ws()
            if not s.text[s.pos:s.pos + 1].isdigit():
                raise s.fail("natural number", "w")
            _, mult = s.bounded("multiplicity", lo=1)
    return Term(atom, mult)


def _parse_expr(s: _Scanner) -> GroupExpr:
    terms = [_parse_term(s)]
    while s.accept("+"):
        terms.append(_parse_term(s))
    return GroupExpr(tuple(terms))


def parse_group_expr(text: str) -> GroupExpr:
    s = _Scanner(text)
    expr = _parse_expr(s)
    if not s.at_end():
        raise s.fail("+", "^", "end of input") if s.depth == 0 else s.fail(")")
    return expr


def serialize(e: GroupExpr) -> str:
    """Canonical text; ``parse_group_expr(serialize(e)) == e``."""
    return str(e)


# -- ring expressions -------------------------------------------------------


def _ring_factor(s: _Scanner) -> RingElement:
    if s.accept("-"):
        return ring_neg(_ring_factor(s))
    if s.accept("("):
        s.depth += 1
        if s.depth > MAX_DEPTH:
            raise SemanticError(s.pos - 1, f"parentheses nested deeper than {MAX_DEPTH}")
        value = _ring_expr(s)
        s.expect(")")
        s.depth -= 1
        return value
    if s.accept("e("):
        w = s.word()
        s.expect(")")
        return basis_idempotent(w)
    s.skip_ws()
    if not s.text[s.pos:s.pos + 1].isdigit():
        raise s.fail("integer", "e(", "(", "-")
    _, num = s.natural("integer")
    den = 1
    if s.accept("/"):
        dpos, den = s.natural("denominator")
        if den == 0:
            raise SemanticError(dpos, "zero denominator")
    # validity in R is checked once the whole expression is evaluated
    return RingElement._trusted(0, (Fraction(num, den),))


def _ring_term(s: _Scanner) -> RingElement:
    value = _ring_factor(s)
    while s.accept("*"):
        value = ring_mul(value, _ring_factor(s))
    return value


def _ring_expr(s: _Scanner) -> RingElement:
    value = _ring_term(s)
    while True:
        if s.accept("+"):
            value = ring_add(value, _ring_term(s))
        elif s.accept("-"):
            value = ring_sub(value, _ring_term(s))
        else:
            return value


def parse_ring_expr(text: str) -> RingElement:
    """Evaluate a ring expression over the rationals, then check that the
    result lies in R (raises ``InvalidCoefficient`` otherwise)."""
    s = _Scanner(text)
    value = _ring_expr(s)
    if not s.at_end():
        raise s.fail("+", "-", "*", "end of input")
    return RingElement(value.level, value.coeffs)
