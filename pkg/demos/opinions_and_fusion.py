"""Binomial opinions: from evidence counts to belief, and back.

Run with ``python3 demos/opinions_and_fusion.py``.
"""

from sltrust import (
    BinomialOpinion,
    Evidence,
    PriorConfig,
    cumulative_fuse,
    evidence_from_opinion,
    fuse_evidence,
    opinion_from_evidence,
)

# Two positive observations and one negative, under the default prior (W=2).
op = opinion_from_evidence(Evidence(2, 1))
print("opinion from (r=2, s=1):", op.as_tuple())
print("projected probability:  ", round(op.projected, 4))

# Mapping back recovers the counts.
print("recovered evidence:     ", evidence_from_opinion(op))

# A larger prior weight makes the same evidence less decisive.
print("same evidence, W=5:     ", opinion_from_evidence(Evidence(2, 1), PriorConfig(5.0)).as_tuple())

# Fusing two independent sources pools their evidence.
other = opinion_from_evidence(Evidence(4, 0))
fused = cumulative_fuse(op, other)
pooled = opinion_from_evidence(fuse_evidence([Evidence(2, 1), Evidence(4, 0)]))
print("\nfused opinion:          ", [round(v, 6) for v in fused.as_tuple()])
print("opinion of pooled counts", [round(v, 6) for v in pooled.as_tuple()])

# A vacuous opinion carries no information and leaves the other operand unchanged.
print("fused with vacuous:     ", cumulative_fuse(op, BinomialOpinion.vacuous()).as_tuple())
