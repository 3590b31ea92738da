"""Quantifying trust in a classifier from its prediction log.

A tiny hand-made log first, then a synthetic one where we know the model is
calibrated and compare it with an over-confident copy.

Run with ``python3 demos/trust_report.py``.
"""

from sltrust import PredictionRecord, QuantifierConfig, SynthSpec, apply_temperature_all, quantify, synth_generate

# Four two-class predictions, binned into M=2 probability clusters.
records = [
    PredictionRecord([0.9, 0.1], 0),
    PredictionRecord([0.8, 0.2], 0),
    PredictionRecord([0.6, 0.4], 1),
    PredictionRecord([0.2, 0.8], 1),
]
report = quantify(records, QuantifierConfig(bin_count=2))
for cluster in report.to_dict()["classes"][0]["clusters"]:
    print("class 0, bin", cluster["bin"], {k: cluster[k] for k in ("n", "t", "r", "s")})
print("class 0 opinion:", report.class_opinions[0].as_tuple())
print()

# Same seed, same labels: k=1 is calibrated, k=2 sharpens every logit.
for k in (1.0, 2.0):
    log = synth_generate(SynthSpec(10_000, 10, sharpening=k, seed=7))
    rep = quantify(apply_temperature_all(log, 1.0))
    print(f"sharpening k={k}")
    print(rep.summary())
    print()
