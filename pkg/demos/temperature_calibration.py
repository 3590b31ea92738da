"""Fitting a temperature to repair an over-confident model.

Run with ``python3 demos/temperature_calibration.py``.
"""

from sltrust import SynthSpec, apply_temperature_all, fit_temperature, quantify, synth_generate

log = synth_generate(SynthSpec(10_000, 10, sharpening=2.0, seed=11))
fit = fit_temperature(log)
print(f"fitted T = {fit.temperature:.4f}  (true sharpening 2.0)")
print(f"NLL {fit.nll_before:.4f} -> {fit.nll_after:.4f} in {fit.iterations} iterations")

before = quantify(apply_temperature_all(log, 1.0))
after = quantify(apply_temperature_all(log, fit.temperature))
print(f"\n{'':>12}{'before':>10}{'after':>10}")
print(f"{'ECE':>12}{before.ece.ece:10.4f}{after.ece.ece:10.4f}")
for name in ("belief", "disbelief", "uncertainty"):
    print(f"{name:>12}{getattr(before.network, name):10.4f}{getattr(after.network, name):10.4f}")
