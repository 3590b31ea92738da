"""Cumulative belief fusion.

Two routes are provided. ``cumulative_fuse`` is the closed-form operator on
opinions; ``fuse_evidence`` adds evidence counts, which is the same operation
when every operand shares the prior weight and base rate. The trust pipeline
uses evidence addition; the closed form is kept for opinions that did not come
from evidence and as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .opinion import BinomialOpinion, Evidence, OpinionError, check_opinion


class DualDogmaticError(OpinionError):
    """Both operands have u = 0; cumulative fusion is undefined."""


@dataclass(frozen=True)
class FusionOutcome:
    opinion: BinomialOpinion
    operand_count: int


def cumulative_fuse(left: BinomialOpinion, right: BinomialOpinion) -> BinomialOpinion:
    """Fuse two opinions with the cumulative operator.

    A vacuous operand is the identity: the other operand's (b, d, u) come back
    unchanged, bit for bit. The base rate is the uncertainty-weighted blend
    unless both operands are vacuous, in which case it is the plain mean.
    """
    check_opinion(left)
    check_opinion(right)
    ua, ub = left.uncertainty, right.uncertainty
    if ua == 0.0 and ub == 0.0:
        raise DualDogmaticError(f"cannot fuse two dogmatic opinions: {left!r}, {right!r}")

    aa, ab = left.base_rate, right.base_rate
    # ua + ub - 2 ua ub rewritten as two non-negative weights, with 1 - u taken
    # as b + d so that near-vacuous operands do not cancel to zero
    wa = ub * (left.belief + left.disbelief)
    wb = ua * (right.belief + right.disbelief)
    if wa + wb == 0.0:
        base_rate = (aa + ab) / 2.0
    else:
        base_rate = (aa * wa + ab * wb) / (wa + wb)

    if left.is_vacuous:
        return BinomialOpinion(right.belief, right.disbelief, right.uncertainty, base_rate)
    if right.is_vacuous:
        return BinomialOpinion(left.belief, left.disbelief, left.uncertainty, base_rate)

    denom = ua + ub - ua * ub
    return BinomialOpinion(
        (left.belief * ub + right.belief * ua) / denom,
        (left.disbelief * ub + right.disbelief * ua) / denom,
        ua * ub / denom,
        base_rate,
    )


def cumulative_fuse_all(ops: Sequence[BinomialOpinion], base_rate: float = 0.5) -> FusionOutcome:
    """Left fold of :func:`cumulative_fuse`.

    The fold order is fixed (left to right) so results are reproducible to the
    last bit; the operator is associative only up to rounding. An empty
    sequence gives the vacuous opinion with ``base_rate``.
    """
    ops = list(ops)
    if not ops:
        return FusionOutcome(BinomialOpinion.vacuous(base_rate), 0)
    acc = check_opinion(ops[0])
    for op in ops[1:]:
        acc = cumulative_fuse(acc, op)
    return FusionOutcome(acc, len(ops))


def fuse_evidence(evs: Iterable[Evidence]) -> Evidence:
    """Componentwise sum of evidence (cumulative fusion in evidence space)."""
    evs = list(evs)
    for ev in evs:
        if ev.positive < 0 or ev.negative < 0:
            raise ValueError(f"negative evidence: {ev!r}")
    return Evidence(math.fsum(e.positive for e in evs), math.fsum(e.negative for e in evs))
