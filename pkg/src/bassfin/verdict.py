"""Group expressions and the composite property evaluator.

Every expression denotes a split group: a torsion part (cyclic, Pruefer and
unbounded-Ulm atoms) plus a torsion-free part (rank-1 atoms, type chains and
the ring R).  Each side is decided on its own and the results are combined.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .arith import INFINITY, ExtNat, format_extnat, is_finite
from .arring import ONE, RingElement, coker_order, split_idempotent
from .locnum import Word
from .pgroup import PrimeData, TorsionDescriptor, torsion_verdict
from .report import PROPERTIES, Finding, Truth, Verdict, check_implications, undecided
from .typesys import (
    AscendingNest,
    CDDescriptor,
    CDEntry,
    Characteristic,
    ConstTail,
    DescendingThreshold,
    TypeDescriptor,
    cd_verdict,
)

__all__ = [
    "Cyclic",
    "Prufer",
    "Integers",
    "Rationals",
    "Rank1",
    "AscChain",
    "DescChain",
    "UlmTail",
    "ARRing",
    "Group",
    "Term",
    "GroupExpr",
    "Atom",
    "flatten",
    "evaluate",
    "check_implications",
    "Verdict",
    "Truth",
]


@dataclass(frozen=True)
class Cyclic:
    p: int
    e: int

    def __str__(self) -> str:
        return f"C({self.p},{self.e})"


@dataclass(frozen=True)
class Prufer:
    p: int

    def __str__(self) -> str:
        return f"Prufer({self.p})"


@dataclass(frozen=True)
class Integers:
    def __str__(self) -> str:
        return "Z"


@dataclass(frozen=True)
class Rationals:
    def __str__(self) -> str:
        return "Q"


@dataclass(frozen=True)
class Rank1:
    char: Characteristic

    def __str__(self) -> str:
        return f"R1({self.char})"


@dataclass(frozen=True)
class AscChain:
    base: Word

    def __str__(self) -> str:
        return f'AscChain("{self.base.bits}")'


@dataclass(frozen=True)
class DescChain:
    start: int

    def __str__(self) -> str:
        return f"DescChain({self.start})"


@dataclass(frozen=True)
class UlmTail:
    p: int

    def __str__(self) -> str:
        return f"UlmTail({self.p})"


@dataclass(frozen=True)
class ARRing:
    def __str__(self) -> str:
        return "ARRing"


@dataclass(frozen=True)
class Group:
    """A parenthesized sub-expression."""

    expr: "GroupExpr"

    def __str__(self) -> str:
        return f"({self.expr})"


Atom = Union[Cyclic, Prufer, Integers, Rationals, Rank1, AscChain, DescChain, UlmTail, ARRing, Group]
TORSION_ATOMS = (Cyclic, Prufer, UlmTail)
INDECOMPOSABLE_ATOMS = (Cyclic, Prufer, Integers, Rationals, Rank1)


@dataclass(frozen=True)
class Term:
    atom: Atom
    mult: ExtNat = 1

    def __post_init__(self):
        if is_finite(self.mult) and self.mult < 1:
            raise ValueError("multiplicities must be >= 1")

    def __str__(self) -> str:
        if self.mult == 1:
            return str(self.atom)
        return f"{self.atom}^{'w' if self.mult is INFINITY else self.mult}"


@dataclass(frozen=True)
class GroupExpr:
    terms: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("an expression needs at least one term")

    def __str__(self) -> str:
        return " + ".join(str(t) for t in self.terms)


def flatten(e: GroupExpr) -> dict[Atom, ExtNat]:
    """Base atoms with total multiplicities (parentheses distributed)."""
    out: dict[Atom, ExtNat] = {}

    def walk(expr: GroupExpr, factor: ExtNat) -> None:
        for t in expr.terms:
            m = INFINITY if (factor is INFINITY or t.mult is INFINITY) else factor * t.mult
            if isinstance(t.atom, Group):
                walk(t.atom.expr, m)
            else:
                out[t.atom] = out.get(t.atom, 0) + m

    walk(e, 1)
    return dict(sorted(out.items(), key=lambda kv: str(kv[0])))


# -- sides ------------------------------------------------------------------


def _torsion_descriptor(atoms: dict[Atom, ExtNat]) -> TorsionDescriptor:
    data: dict[int, dict] = {}
    for atom, m in atoms.items():
        d = data.setdefault(atom.p, {"ulm": {}, "tail": False, "prufer": 0})
        if isinstance(atom, Cyclic):
            d["ulm"][atom.e - 1] = d["ulm"].get(atom.e - 1, 0) + m
        elif isinstance(atom, Prufer):
            d["prufer"] = d["prufer"] + m
        else:
            d["tail"] = True
            if m is INFINITY:
                # (sum_n Z/p^(n+1))^(w) has every Ulm invariant infinite
                d["ulm"][0] = INFINITY
    return TorsionDescriptor(
        {p: PrimeData(d["ulm"], d["tail"], d["prufer"]) for p, d in data.items()}
    )


def _cd_descriptor(atoms: dict[Atom, ExtNat]) -> CDDescriptor:
    entries, families = [], []
    for atom, m in atoms.items():
        if isinstance(atom, Integers):
            entries.append(CDEntry(TypeDescriptor(Characteristic(ConstTail(False))), m))
        elif isinstance(atom, Rationals):
            entries.append(CDEntry(TypeDescriptor(Characteristic(ConstTail(True))), m))
        elif isinstance(atom, Rank1):
            entries.append(CDEntry(TypeDescriptor(atom.char), m))
        elif isinstance(atom, AscChain):
            families.append(AscendingNest(atom.base))
        elif isinstance(atom, DescChain):
            families.append(DescendingThreshold(atom.start))
    return CDDescriptor(tuple(entries), tuple(families))


_OMEGA_ANCHOR = "X^(w) = X + X^(w): not Dedekind-finite"


def _ring_verdict() -> Verdict:
    """The additive group of R on its own."""
    e0, e1 = split_idempotent(ONE)
    two = RingElement.integer(2)
    return Verdict(
        {
            "bassian_finite": Finding(Truth.TRUE, "finite-injective-rank", "finite injective rank => relatively co-Hopfian => Bassian-finite"),
            "dedekind_finite": Finding(Truth.TRUE, "bassian-finite-implies", "Bassian-finite => Dedekind-finite"),
            "co_hopfian": undecided("not-settled", "co-Hopficity of R is not asserted"),
            "relatively_co_hopfian": Finding(Truth.TRUE, "finite-injective-rank", "finite injective rank => relatively co-Hopfian"),
            "co_bassian_finite": Finding(
                Truth.FALSE, "super-decomposable", "co-Bassian-finite <=> indecomposable",
                {"split": [e0.to_json(), e1.to_json()]},
            ),
            "finite_injective_rank": Finding(Truth.TRUE, "ring-multiplications", "R is an E-ring; alpha*R has finite index iff alpha is a non-zero-divisor"),
            "co_finitely_hopfian": Finding(
                Truth.FALSE, "finite-injective-rank-divisibility", "finite injective rank: co-finitely Hopfian <=> divisible of finite rank",
                {"multiplier": "2", "coker_order": format_extnat(coker_order(two))},
            ),
        }
    )


def _torsion_free_verdict(atoms: dict[Atom, ExtNat]) -> Verdict:
    cd = _cd_descriptor(atoms)
    ring_mult = atoms.get(ARRing(), 0)
    if ring_mult == 0:
        v = cd_verdict(cd)
    elif cd.is_zero() and ring_mult == 1:
        v = _ring_verdict()
    else:
        # only summand-closed failures carry over from the CD part
        sub = cd_verdict(cd) if not cd.is_zero() else None
        changes = {}
        for prop in ("bassian_finite", "dedekind_finite", "co_hopfian", "relatively_co_hopfian"):
            if sub is not None and sub.value(prop) is Truth.FALSE:
                changes[prop] = Finding(Truth.FALSE, "summand-fails", "these properties pass to direct summands", {"summand": sub[prop].to_json()})
            else:
                changes[prop] = undecided("not-settled", "sums involving R are not decided")
        if sub is not None and sub.value("finite_injective_rank") is Truth.FALSE:
            changes["finite_injective_rank"] = Finding(Truth.FALSE, "infinite-direct-sum", "infinite direct sums never have finite injective rank")
        else:
            changes["finite_injective_rank"] = undecided("not-settled", "sums involving R are not decided")
        changes["co_bassian_finite"] = Finding(Truth.FALSE, "decomposable", "co-Bassian-finite <=> indecomposable")
        changes["co_finitely_hopfian"] = undecided("not-settled", "co-finite Hopficity only decided under finite injective rank")
        v = Verdict(changes)

    omega = [a for a, m in atoms.items() if m is INFINITY and isinstance(a, (AscChain, DescChain, ARRing))]
    if omega:
        witness = {"summand": str(omega[0])}
        fail = Finding(Truth.FALSE, "omega-multiplicity", _OMEGA_ANCHOR, witness)
        v = v.replace(
            bassian_finite=fail,
            dedekind_finite=fail,
            co_hopfian=fail,
            relatively_co_hopfian=fail,
            finite_injective_rank=Finding(Truth.FALSE, "infinite-direct-sum", "infinite direct sums never have finite injective rank", witness),
            co_finitely_hopfian=undecided("not-settled", "co-finite Hopficity only decided under finite injective rank"),
        )
    return v


# -- composition ------------------------------------------------------------

_SPLIT_ANCHOR = "split group T + G/T: property holds iff it holds for both parts"


def _combine(prop: str, torsion: Verdict, free: Verdict) -> Finding:
    t, f = torsion[prop], free[prop]
    value = t.value & f.value
    if value is Truth.FALSE:
        side, sub = ("torsion", t) if t.value is Truth.FALSE else ("torsion-free", f)
        return Finding(value, "split-mixed", _SPLIT_ANCHOR, {"side": side, "part": sub.to_json()})
    witness = {"torsion": t.value.value, "torsion-free": f.value.value}
    return Finding(value, "split-mixed", _SPLIT_ANCHOR, witness)


def _co_bassian(atoms: dict[Atom, ExtNat]) -> Finding:
    anchor = "co-Bassian-finite <=> indecomposable"
    if len(atoms) == 1:
        (atom, m), = atoms.items()
        if m == 1 and isinstance(atom, INDECOMPOSABLE_ATOMS):
            return Finding(Truth.TRUE, "indecomposable", anchor, {"summand": str(atom)})
        if m == 1:
            return Finding(Truth.FALSE, "decomposable", anchor, {"summand": str(atom)})
    return Finding(Truth.FALSE, "decomposable", anchor, {"summands": str(len(atoms)) if all(is_finite(m) for m in atoms.values()) else "INFINITY"})


def evaluate(e: GroupExpr) -> Verdict:
    atoms = flatten(e)
    torsion = {a: m for a, m in atoms.items() if isinstance(a, TORSION_ATOMS)}
    free = {a: m for a, m in atoms.items() if not isinstance(a, TORSION_ATOMS)}
    tv = torsion_verdict(_torsion_descriptor(torsion)) if torsion else None
    fv = _torsion_free_verdict(free) if free else None

    if tv is not None and fv is not None:
        findings = {p: _combine(p, tv, fv) for p in ("bassian_finite", "dedekind_finite", "co_hopfian", "relatively_co_hopfian")}
        findings["finite_injective_rank"] = Finding(Truth.FALSE, "torsion-present", "finite injective rank forces torsion-free")
        findings["co_finitely_hopfian"] = undecided("not-settled", "co-finite Hopficity only decided under finite injective rank")
        v = Verdict({p: findings.get(p, tv[p]) for p in PROPERTIES})
    else:
        v = tv if tv is not None else fv
    if atoms == {ARRing(): 1}:
        return v  # keeps the explicit idempotent splitting as witness
    return v.replace(co_bassian_finite=_co_bassian(atoms))
