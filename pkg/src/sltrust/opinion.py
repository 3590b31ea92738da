"""Binomial opinions and the evidence <-> opinion mapping.

A binomial opinion is the quadruple (belief, disbelief, uncertainty, base_rate)
over a two-valued proposition. It is interchangeable with a pair of evidence
counts (r, s) given a prior weight W:

    b = r / (W + r + s)      r = b * W / u
    d = s / (W + r + s)      s = d * W / u
    u = W / (W + r + s)      (u != 0)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

SIMPLEX_TOL = 1e-9


class OpinionError(ValueError):
    """Raised when an opinion violates the simplex or unit-interval constraints."""


class DogmaticOpinionError(OpinionError):
    """Raised when an operation needs u > 0 but got a dogmatic opinion."""


def _sig12(x: float) -> float:
    return float(f"{x:.12g}")


@dataclass(frozen=True)
class Evidence:
    """Positive and negative evidence. Real-valued, both non-negative."""

    positive: float = 0.0
    negative: float = 0.0

    def __post_init__(self):
        r, s = float(self.positive), float(self.negative)
        if not (r >= 0.0 and s >= 0.0):
            raise ValueError(f"evidence must be non-negative, got r={r!r}, s={s!r}")
        object.__setattr__(self, "positive", r)
        object.__setattr__(self, "negative", s)

    @property
    def total(self) -> float:
        return self.positive + self.negative

    def __add__(self, other: Evidence) -> Evidence:
        if not isinstance(other, Evidence):
            return NotImplemented
        return Evidence(self.positive + other.positive, self.negative + other.negative)


@dataclass(frozen=True)
class PriorConfig:
    """Prior weight W (amount of vacuous evidence) and base rate a."""

    prior_weight: float = 2.0
    base_rate: float = 0.5

    def __post_init__(self):
        if not (self.prior_weight > 0.0 and math.isfinite(self.prior_weight)):
            raise ValueError(f"prior_weight must be positive, got {self.prior_weight!r}")
        if not 0.0 <= self.base_rate <= 1.0:
            raise ValueError(f"base_rate must lie in [0, 1], got {self.base_rate!r}")


@dataclass(frozen=True)
class Violation:
    """One failed opinion constraint. ``amount`` is how far outside the bound."""

    constraint: str
    component: str
    amount: float

    def __str__(self):
        return f"{self.constraint} ({self.component}, off by {self.amount:.3g})"


@dataclass(frozen=True)
class OpinionCheck:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.valid

    def describe(self) -> str:
        if self.valid:
            return "valid"
        return "invalid: " + "; ".join(str(v) for v in self.violations)


@dataclass(frozen=True)
class BinomialOpinion:
    """Subjective-logic binomial opinion.

    Construction does not validate, so malformed values can be represented and
    inspected with :func:`validate_opinion`. Operations that consume opinions
    check them first.
    """

    belief: float
    disbelief: float
    uncertainty: float
    base_rate: float = 0.5

    @classmethod
    def vacuous(cls, base_rate: float = 0.5) -> BinomialOpinion:
        return cls(0.0, 0.0, 1.0, base_rate)

    @property
    def projected(self) -> float:
        return projected_probability(self)

    @property
    def is_vacuous(self) -> bool:
        return self.uncertainty == 1.0 and self.belief == 0.0 and self.disbelief == 0.0

    @property
    def is_dogmatic(self) -> bool:
        return self.uncertainty == 0.0

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.belief, self.disbelief, self.uncertainty, self.base_rate)

    def to_dict(self) -> dict:
        return {
            "belief": _sig12(self.belief),
            "disbelief": _sig12(self.disbelief),
            "uncertainty": _sig12(self.uncertainty),
            "base_rate": _sig12(self.base_rate),
            "projected": _sig12(self.projected),
        }

    @classmethod
    def from_dict(cls, d: dict) -> BinomialOpinion:
        return cls(float(d["belief"]), float(d["disbelief"]),
                   float(d["uncertainty"]), float(d.get("base_rate", 0.5)))


def validate_opinion(op: BinomialOpinion, tol: float = SIMPLEX_TOL) -> OpinionCheck:
    """Check unit-interval bounds on every component and b + d + u = 1."""
    found = []
    for name in ("belief", "disbelief", "uncertainty", "base_rate"):
        v = getattr(op, name)
        if not math.isfinite(v):
            found.append(Violation("finite", name, math.inf))
        elif v < 0.0:
            found.append(Violation("non-negative", name, -v))
        elif v > 1.0:
            found.append(Violation("at most one", name, v - 1.0))
    total = op.belief + op.disbelief + op.uncertainty
    if math.isfinite(total) and abs(total - 1.0) > tol:
        found.append(Violation(f"b + d + u = 1 (sum = {total:.12g})", "sum", abs(total - 1.0)))
    return OpinionCheck(tuple(found))


def check_opinion(op: BinomialOpinion) -> BinomialOpinion:
    check = validate_opinion(op)
    if not check:
        raise OpinionError(f"{op!r} is {check.describe()}")
    return op


def opinion_from_evidence(ev: Evidence, prior: PriorConfig = PriorConfig()) -> BinomialOpinion:
    """Map evidence (r, s) to an opinion with prior weight W and base rate a.

    >>> opinion_from_evidence(Evidence(2, 0))
    BinomialOpinion(belief=0.5, disbelief=0.0, uncertainty=0.5, base_rate=0.5)
    """
    r, s = ev.positive, ev.negative
    if r < 0 or s < 0:
        raise ValueError("evidence must be non-negative")
    w = prior.prior_weight
    denom = w + r + s
    return BinomialOpinion(r / denom, s / denom, w / denom, prior.base_rate)


def evidence_from_opinion(op: BinomialOpinion, prior: PriorConfig = PriorConfig()) -> Evidence:
    """Inverse mapping, defined only for u > 0."""
    check_opinion(op)
    if op.uncertainty <= 0.0:
        raise DogmaticOpinionError(f"evidence is undefined for a dogmatic opinion: {op!r}")
    w = prior.prior_weight
    return Evidence(op.belief * w / op.uncertainty, op.disbelief * w / op.uncertainty)


def projected_probability(op: BinomialOpinion) -> float:
    """P(x) = b + u * a."""
    return op.belief + op.uncertainty * op.base_rate
