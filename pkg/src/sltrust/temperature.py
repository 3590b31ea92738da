"""Post-hoc temperature scaling of logits.

The temperature is fitted by minimising mean negative log-likelihood over
``log T`` in ``[log 0.05, log 20]``: a 64-point grid picks the bracket, then a
golden-section search refines it to 1e-4 in ``log T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .records import LOGITS, PROBS, LogitRecord, PredictionRecord, RecordFile, RecordsLike, as_arrays

T_MIN = 0.05
T_MAX = 20.0
LOG_T_TOL = 1e-4
GRID_POINTS = 64
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class DegenerateInputError(ValueError):
    """The NLL does not depend on the temperature, so nothing can be fitted."""


@dataclass(frozen=True)
class TemperatureFit:
    temperature: float
    nll_before: float
    nll_after: float
    iterations: int
    boundary: bool = False

    def to_dict(self) -> dict:
        return {
            "temperature": float(f"{self.temperature:.12g}"),
            "nll_before": float(f"{self.nll_before:.12g}"),
            "nll_after": float(f"{self.nll_after:.12g}"),
            "boundary": self.boundary,
            "iterations": self.iterations,
        }


def _check_t(t):
    if not (t > 0 and math.isfinite(t)):
        raise ValueError(f"temperature must be positive and finite, got {t!r}")


def softmax(z: np.ndarray, t: float = 1.0) -> np.ndarray:
    """Row-wise softmax of ``z / t`` with max subtraction."""
    _check_t(t)
    z = np.asarray(z, dtype=float) / t
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def apply_temperature(rec: LogitRecord, t: float) -> PredictionRecord:
    return PredictionRecord(softmax(rec.logits, t), rec.true_label)


def apply_temperature_all(records: RecordsLike, t: float) -> RecordFile:
    """Calibrated probability batch from a logit batch."""
    z, labels = as_arrays(records, LOGITS)
    truth = records.truth if isinstance(records, RecordFile) else None
    return RecordFile(PROBS, softmax(z, t), labels, truth=truth)


def _nll(z: np.ndarray, labels: np.ndarray, t: float) -> float:
    s = z / t
    mx = s.max(axis=1)
    lse = mx + np.log(np.exp(s - mx[:, None]).sum(axis=1))
    return float(np.mean(lse - s[np.arange(len(labels)), labels]))


def mean_nll(records: RecordsLike, t: float) -> float:
    """Mean of ``-log softmax(z / t)[label]`` over the batch."""
    _check_t(t)
    z, labels = as_arrays(records, LOGITS)
    return _nll(z, labels, t)


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float = LOG_T_TOL):
    """Minimise a unimodal ``f`` on ``[lo, hi]``.

    Returns ``(x, f(x), iterations)`` where x is the best point evaluated.
    """
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    it = 0
    while b - a > tol:
        it += 1
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
    return (x1, f1, it) if f1 <= f2 else (x2, f2, it)


def fit_temperature(records: RecordsLike, t_min: float = T_MIN, t_max: float = T_MAX) -> TemperatureFit:
    """Fit the scalar temperature that minimises mean NLL.

    The result never has higher NLL than T = 1. When the minimum sits on an
    end of the search interval, ``boundary`` is set instead of raising.
    """
    if not 0 < t_min < 1 < t_max:
        raise ValueError("search interval must contain T = 1")
    z, labels = as_arrays(records, LOGITS)
    z = z - z.max(axis=1, keepdims=True)

    def f(log_t):
        return _nll(z, labels, math.exp(log_t))

    lo, hi = math.log(t_min), math.log(t_max)
    grid = np.linspace(lo, hi, GRID_POINTS)
    values = np.array([f(x) for x in grid])
    if np.ptp(values) <= 1e-12 * max(1.0, abs(values[0])):
        raise DegenerateInputError("negative log-likelihood does not depend on the temperature")

    k = int(np.argmin(values))
    a, b = grid[max(k - 1, 0)], grid[min(k + 1, GRID_POINTS - 1)]
    x, fx, iters = golden_section(f, a, b)
    # at an end of the interval the grid point itself is the answer
    if values[k] < fx or (k in (0, GRID_POINTS - 1) and values[k] <= fx):
        x, fx = grid[k], values[k]

    nll_before = f(0.0)
    if nll_before <= fx:
        x, fx = 0.0, nll_before
    boundary = bool(x - lo <= LOG_T_TOL or hi - x <= LOG_T_TOL)
    return TemperatureFit(math.exp(x), nll_before, fx, iters, boundary)
