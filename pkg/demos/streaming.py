"""Updating a trust report one prediction at a time.

A session keeps only per-cell counters, so the snapshot after N updates is
the same report a batch run over those N records would give.

Run with ``python3 demos/streaming.py``.
"""

import numpy as np

from sltrust import QuantifierConfig, SynthSpec, apply_temperature_all, new_session, quantify, synth_generate

records = apply_temperature_all(synth_generate(SynthSpec(3_000, 5, seed=2)), 1.0)
cfg = QuantifierConfig(bin_count=10)
session = new_session(cfg)

for i, rec in enumerate(records, start=1):
    session.update(rec)
    if i in (10, 100, 1_000, 3_000):
        net = session.snapshot().network
        print(f"after {i:>5} records: b={net.belief:.4f} d={net.disbelief:.4f} u={net.uncertainty:.4f}")

batch = quantify(records, cfg)
same = np.allclose(session.snapshot().network.as_tuple(), batch.network.as_tuple(), atol=1e-12)
print("matches batch report:", same)
