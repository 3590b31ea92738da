"""Uniform probability bins and Expected Calibration Error."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .records import PROBS, RecordsLike, as_arrays

BIN_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class BinningScheme:
    """M equal-width bins on [0, 1].

    Bin i covers ``[i/M, (i+1)/M)``; the last bin is closed at 1. Each bin's
    representative is its midpoint.
    """

    bin_count: int
    lower_edges: np.ndarray
    representatives: np.ndarray

    def __len__(self):
        return self.bin_count

    def interval(self, i: int) -> tuple[float, float]:
        return (i / self.bin_count, (i + 1) / self.bin_count)


def make_uniform_bins(m: int) -> BinningScheme:
    if int(m) != m or m < 1:
        raise ValueError(f"bin count must be a positive integer, got {m!r}")
    m = int(m)
    idx = np.arange(m)
    edges = idx / m
    reps = idx / m + 1.0 / (2 * m)
    edges.setflags(write=False)
    reps.setflags(write=False)
    return BinningScheme(m, edges, reps)


def assign_bin(p: float, scheme: BinningScheme) -> int:
    """Index of the bin holding probability ``p``; 1.0 goes to the last bin."""
    if math.isnan(p) or p < -BIN_SLACK or p > 1.0 + BIN_SLACK:
        raise ValueError(f"probability {p!r} outside [0, 1]")
    p = min(max(p, 0.0), 1.0)
    return min(int(math.floor(p * scheme.bin_count)), scheme.bin_count - 1)


def assign_bins(p: np.ndarray, scheme: BinningScheme) -> np.ndarray:
    """Vectorised :func:`assign_bin`."""
    p = np.asarray(p, dtype=float)
    if p.size and (np.isnan(p).any() or p.min() < -BIN_SLACK or p.max() > 1.0 + BIN_SLACK):
        raise ValueError("probabilities outside [0, 1]")
    p = np.clip(p, 0.0, 1.0)
    return np.minimum((p * scheme.bin_count).astype(np.int64), scheme.bin_count - 1)


@dataclass(frozen=True, eq=False)
class EceResult:
    """ECE plus the per-bin data it was computed from.

    Empty bins report count 0 and zero confidence/accuracy.
    """

    ece: float
    counts: np.ndarray
    confidence: np.ndarray
    accuracy: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def per_bin(self) -> list[tuple[int, float, float]]:
        return [(int(n), float(c), float(a)) for n, c, a in zip(self.counts, self.confidence, self.accuracy)]

    def to_dict(self) -> dict:
        return {
            "ece": float(f"{self.ece:.12g}"),
            "bins": [
                {"index": i, "count": n, "confidence": float(f"{c:.12g}"), "accuracy": float(f"{a:.12g}")}
                for i, (n, c, a) in enumerate(self.per_bin)
            ],
        }


def ece_from_sums(counts, conf_sums, correct_sums) -> EceResult:
    """Build an :class:`EceResult` from per-bin count, confidence-sum and hit-count totals."""
    counts = np.asarray(counts, dtype=np.int64)
    n = counts.sum()
    nz = counts > 0
    conf = np.zeros(counts.shape)
    acc = np.zeros(counts.shape)
    conf[nz] = np.asarray(conf_sums, dtype=float)[nz] / counts[nz]
    acc[nz] = np.asarray(correct_sums, dtype=float)[nz] / counts[nz]
    ece = float(np.sum(counts[nz] / n * np.abs(acc[nz] - conf[nz]))) if n else 0.0
    return EceResult(ece, counts, conf, acc)


def compute_ece(records: RecordsLike, scheme: BinningScheme) -> EceResult:
    """Top-label ECE.

    Each record is binned by its confidence (largest predicted probability);
    bin accuracy is the fraction whose argmax, ties to the lowest index,
    equals the true label.
    """
    probs, labels = as_arrays(records, PROBS)
    return ece_from_arrays(probs, labels, scheme)


def ece_from_arrays(probs: np.ndarray, labels: np.ndarray, scheme: BinningScheme) -> EceResult:
    pred = probs.argmax(axis=1)
    conf = probs[np.arange(len(pred)), pred]
    bins = assign_bins(conf, scheme)
    m = scheme.bin_count
    return ece_from_sums(
        np.bincount(bins, minlength=m),
        np.bincount(bins, weights=conf, minlength=m),
        np.bincount(bins, weights=(pred == labels), minlength=m),
    )
