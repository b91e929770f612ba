"""Three-valued property reports with structured certificates."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Optional

__all__ = [
    "Truth",
    "Finding",
    "Verdict",
    "PROPERTIES",
    "IMPLICATION_CHAIN",
    "check_implications",
    "undecided",
]


class Truth(enum.Enum):
    TRUE = "TRUE"
    FALSE = "FALSE"
    UNDECIDED = "UNDECIDED"

    @classmethod
    def of(cls, flag: bool) -> "Truth":
        return cls.TRUE if flag else cls.FALSE

    def __and__(self, other: "Truth") -> "Truth":
        if Truth.FALSE in (self, other):
            return Truth.FALSE
        if self is Truth.TRUE and other is Truth.TRUE:
            return Truth.TRUE
        return Truth.UNDECIDED


PROPERTIES = (
    "bassian_finite",
    "dedekind_finite",
    "co_hopfian",
    "relatively_co_hopfian",
    "co_bassian_finite",
    "finite_injective_rank",
    "co_finitely_hopfian",
)

# strongest first: each TRUE forbids FALSE further down the list
IMPLICATION_CHAIN = (
    "co_hopfian",
    "relatively_co_hopfian",
    "bassian_finite",
    "dedekind_finite",
)


@dataclass(frozen=True)
class Finding:
    value: Truth
    rule: str
    anchor: str
    witness: Optional[Mapping[str, Any]] = None

    def to_json(self) -> dict:
        out = {"value": self.value.value, "rule": self.rule, "anchor": self.anchor}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def undecided(rule: str = "not-settled", anchor: str = "no decision rule applies") -> Finding:
    return Finding(Truth.UNDECIDED, rule, anchor)


@dataclass(frozen=True)
class Verdict:
    findings: Mapping[str, Finding] = field(default_factory=dict)

    def __post_init__(self):
        missing = [p for p in PROPERTIES if p not in self.findings]
        extra = [p for p in self.findings if p not in PROPERTIES]
        if missing or extra:
            raise ValueError(f"verdict properties mismatch: missing={missing} extra={extra}")
        object.__setattr__(self, "findings", {p: self.findings[p] for p in PROPERTIES})

    def __getitem__(self, prop: str) -> Finding:
        return self.findings[prop]

    def value(self, prop: str) -> Truth:
        return self.findings[prop].value

    def values(self) -> dict[str, Truth]:
        return {p: f.value for p, f in self.findings.items()}

    def has_undecided(self) -> bool:
        return any(f.value is Truth.UNDECIDED for f in self.findings.values())

    def replace(self, **changes: Finding) -> "Verdict":
        merged = dict(self.findings)
        merged.update(changes)
        return Verdict(merged)

    def to_json(self) -> dict:
        return {p: f.to_json() for p, f in self.findings.items()}

    @classmethod
    def from_findings(cls, items: Iterable[tuple[str, Finding]]) -> "Verdict":
        return cls(dict(items))


def check_implications(v: Verdict) -> bool:
    """False iff some TRUE entry of the chain sits above a FALSE entry."""
    values = [v.value(p) for p in IMPLICATION_CHAIN]
    for i, upper in enumerate(values):
        if upper is Truth.TRUE and Truth.FALSE in values[i + 1:]:
            return False
    return True
