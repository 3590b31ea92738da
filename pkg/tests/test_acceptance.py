"""Exit criteria for the package, one test per criterion.

Each test prints a single PASS/FAIL line (collected into the terminal summary
by conftest) and then asserts.
"""

import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from sltrust.calibration import compute_ece, make_uniform_bins
from sltrust.data import SynthSpec, synth_generate
from sltrust.fusion import cumulative_fuse, cumulative_fuse_all, fuse_evidence
from sltrust.opinion import BinomialOpinion, Evidence, PriorConfig, evidence_from_opinion, opinion_from_evidence
from sltrust.records import LogitRecord, PredictionRecord, RecordFile
from sltrust.temperature import T_MAX, T_MIN, apply_temperature, apply_temperature_all, fit_temperature
from sltrust.trust import QuantifierConfig, accumulate_evidence, class_opinion, new_session, quantify

SEED = 20241
RNG_SEED = 8675309


def verdict(name, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else "")
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def random_opinion(rng):
    u = rng.uniform(1e-6, 1.0)
    b = (1 - u) * rng.uniform()
    return BinomialOpinion(b, 1 - u - b, u, 0.5)


def test_ac1_round_trip():
    rng = np.random.default_rng(RNG_SEED)
    start = time.perf_counter()
    worst = 0.0
    priors = [PriorConfig(w) for w in (1.0, 2.0, 5.0)]
    for r, s, k in zip(rng.uniform(0, 1000, 10_000), rng.uniform(0, 1000, 10_000), rng.integers(0, 3, 10_000)):
        prior = priors[k]
        back = evidence_from_opinion(opinion_from_evidence(Evidence(r, s), prior), prior)
        worst = max(worst, abs(back.positive - r), abs(back.negative - s))
    elapsed = time.perf_counter() - start
    verdict("AC1 opinion round trip", worst <= 1e-9 and elapsed < 1.0,
            f"max error {worst:.2e} (<= 1e-9), {elapsed:.2f}s (< 1s)")


def test_ac2_fusion_laws():
    rng = np.random.default_rng(RNG_SEED + 1)
    start = time.perf_counter()
    comm = assoc = homo = 0.0
    identity_exact = True
    vac = BinomialOpinion.vacuous()
    for _ in range(10_000):
        a, b, c = random_opinion(rng), random_opinion(rng), random_opinion(rng)
        ab, ba = cumulative_fuse(a, b), cumulative_fuse(b, a)
        comm = max(comm, max(abs(x - y) for x, y in zip(ab.as_tuple(), ba.as_tuple())))
        left = cumulative_fuse(ab, c)
        right = cumulative_fuse(a, cumulative_fuse(b, c))
        assoc = max(assoc, max(abs(x - y) for x, y in zip(left.as_tuple(), right.as_tuple())))
        identity_exact &= cumulative_fuse(a, vac).as_tuple()[:3] == a.as_tuple()[:3]
        identity_exact &= cumulative_fuse(vac, a).as_tuple()[:3] == a.as_tuple()[:3]

        evs = [Evidence(*rng.uniform(0, 50, 2)) for _ in range(3)]
        via_sum = opinion_from_evidence(fuse_evidence(evs))
        via_ops = cumulative_fuse_all([opinion_from_evidence(e) for e in evs]).opinion
        homo = max(homo, max(abs(x - y) for x, y in zip(via_sum.as_tuple(), via_ops.as_tuple())))
    elapsed = time.perf_counter() - start
    ok = comm <= 1e-9 and assoc <= 1e-9 and homo <= 1e-9 and identity_exact and elapsed < 5.0
    verdict("AC2 fusion laws", ok,
            f"commutativity {comm:.1e}, associativity {assoc:.1e}, homomorphism {homo:.1e} (<= 1e-9), "
            f"vacuous identity exact={identity_exact}, {elapsed:.2f}s (< 5s)")


def test_ac3_golden_example():
    records = [PredictionRecord([p, 1 - p], 0 if y else 1)
               for p, y in zip([0.9, 0.8, 0.6, 0.2], [True, True, False, False])]
    cfg = QuantifierConfig(bin_count=2)
    g = accumulate_evidence(records, cfg)
    hi = (int(g.n[0, 1]), int(g.t[0, 1]), float(g.r[0, 1]), float(g.s[0, 1]))
    lo = (int(g.n[0, 0]), int(g.t[0, 0]), float(g.r[0, 0]), float(g.s[0, 0]))
    op = class_opinion(g, 0, cfg)
    err = max(abs(op.belief - 4 / 9), abs(op.disbelief - 1 / 9), abs(op.uncertainty - 4 / 9))
    ok = hi == (3, 2, 2.0, 0.25) and lo == (1, 0, 0.0, 0.25) and err <= 1e-12
    verdict("AC3 golden worked example", ok, f"cells {hi}, {lo}; opinion error {err:.1e} (<= 1e-12)")


def test_ac4_streaming_equals_batch():
    rng = np.random.default_rng(RNG_SEED + 4)
    worst = 0.0
    counters_equal = True
    for _ in range(100):
        n = int(rng.integers(1, 1001))
        c = int(rng.integers(2, 11))
        rf = RecordFile("probs", rng.dirichlet(np.full(c, rng.uniform(0.2, 3)), size=n), rng.integers(0, c, n))
        cfg = QuantifierConfig(bin_count=int(rng.integers(1, 16)))
        session = new_session(cfg)
        for rec in rf:
            session.update(rec)
        s, b = session.snapshot(), quantify(rf, cfg)
        counters_equal &= np.array_equal(s.grid.n, b.grid.n) and np.array_equal(s.grid.t, b.grid.t)
        pairs = [(s.network, b.network)] + list(zip(s.class_opinions, b.class_opinions))
        pairs += [(x, y) for ra, rb in zip(s.cluster_opinions, b.cluster_opinions) for x, y in zip(ra, rb)]
        for x, y in pairs:
            worst = max(worst, max(abs(p - q) for p, q in zip(x.as_tuple(), y.as_tuple())))
    verdict("AC4 streaming equals batch", counters_equal and worst <= 1e-9,
            f"counters exact={counters_equal}, max opinion diff {worst:.1e} (<= 1e-9)")


def _synthetic_report(k, temperature=1.0):
    rf = synth_generate(SynthSpec(10_000, 10, sharpening=k, concentration=1.0, seed=SEED))
    return rf, quantify(apply_temperature_all(rf, temperature))


def test_ac5_calibration_detection():
    start = time.perf_counter()
    _, r1 = _synthetic_report(1.0)
    _, r2 = _synthetic_report(2.0)
    elapsed = time.perf_counter() - start
    e1, e2 = r1.ece.ece, r2.ece.ece
    ok = (e1 <= 0.03 and e2 > e1 + 0.05
          and r1.network.belief > r2.network.belief and r1.network.disbelief < r2.network.disbelief
          and elapsed < 10.0)
    verdict("AC5 calibration detection", ok,
            f"ECE k=1 {e1:.4f} (<= 0.03), k=2 {e2:.4f} (> k=1 + 0.05); "
            f"belief {r1.network.belief:.4f} > {r2.network.belief:.4f}; "
            f"disbelief {r1.network.disbelief:.4f} < {r2.network.disbelief:.4f}; {elapsed:.2f}s (< 10s)")


def _grid_oracle(rf, points=10_000):
    z = rf.values - rf.values.max(axis=1, keepdims=True)
    idx = np.arange(len(rf))
    best = math.inf
    for t in np.exp(np.linspace(math.log(T_MIN), math.log(T_MAX), points)):
        s = z / t
        best = min(best, float(np.mean(np.log(np.exp(s).sum(axis=1)) - s[idx, rf.labels])))
    return best


def test_ac6_temperature_recovery():
    rf, _ = _synthetic_report(2.0)
    _, baseline = _synthetic_report(1.0)
    fit = fit_temperature(rf)
    oracle = _grid_oracle(rf)
    after = quantify(apply_temperature_all(rf, fit.temperature))
    gap = abs(fit.nll_after - oracle)
    belief_gap = abs(after.network.belief - baseline.network.belief)
    ok = (abs(fit.temperature - 2.0) <= 0.05 * 2.0 and fit.nll_after <= fit.nll_before and gap <= 1e-6
          and after.ece.ece < 0.04 and belief_gap <= 0.02)
    verdict("AC6 temperature recovery", ok,
            f"T={fit.temperature:.4f} (2 +/- 5%), NLL {fit.nll_before:.4f} -> {fit.nll_after:.6f}, "
            f"grid-oracle gap {gap:.1e} (<= 1e-6), ECE after {after.ece.ece:.4f} (< 0.04), "
            f"belief gap to k=1 {belief_gap:.4f} (<= 0.02)")


def test_ac7_argmax_invariance():
    rng = np.random.default_rng(RNG_SEED + 7)
    changed = 0
    for _ in range(10_000):
        c = int(rng.integers(2, 12))
        rec = LogitRecord(rng.normal(scale=rng.uniform(0.1, 10), size=c), 0)
        top = int(np.argmax(rec.logits))
        for t in (0.1, 1.0, 10.0):
            changed += int(np.argmax(apply_temperature(rec, t).probabilities)) != top
    verdict("AC7 argmax invariance", changed == 0, f"{changed} of 30000 argmax changes")


def test_ac8_linear_scaling():
    def timed(n):
        rf = apply_temperature_all(synth_generate(SynthSpec(n, 10, seed=SEED)), 1.0)
        cfg = QuantifierConfig(bin_count=10)
        quantify(rf, cfg)
        best = math.inf
        for _ in range(5):
            start = time.perf_counter()
            quantify(rf, cfg)
            best = min(best, time.perf_counter() - start)
        return best

    t1, t2 = timed(100_000), timed(200_000)
    ratio = t2 / t1
    ok = 1.4 <= ratio <= 2.6 and t2 < 5.0
    verdict("AC8 linear complexity", ok,
            f"N=1e5 {t1 * 1e3:.1f}ms, N=2e5 {t2 * 1e3:.1f}ms, ratio {ratio:.2f} (2 +/- 30%), abs < 5s")


def test_ac9_ece_fixtures():
    two = lambda p, y: PredictionRecord([p, 1 - p], y)
    two_bins = [two(0.8, 0)] * 3 + [two(0.8, 1)] * 2 + [two(0.6, 0)] * 4 + [two(0.6, 1)]
    perfect = [two(0.75, 0)] * 3 + [two(0.75, 1)] + [PredictionRecord([0.5, 0.5], 0), PredictionRecord([0.5, 0.5], 1)]
    scheme = make_uniform_bins(10)
    e_two, e_perfect = compute_ece(two_bins, scheme).ece, compute_ece(perfect, scheme).ece
    ok = e_two == pytest.approx(0.2, abs=1e-12) and e_perfect == 0.0
    verdict("AC9 ECE fixtures", ok, f"two-bin ECE {e_two!r} (0.2), perfect-match ECE {e_perfect!r} (0)")
