"""Prediction records and the array-backed batch that carries them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

import numpy as np

SIMPLEX_TOL = 1e-6

PROBS = "probs"
LOGITS = "logits"


class RecordError(ValueError):
    """Malformed or inconsistent prediction records."""


class EmptyInputError(RecordError):
    def __init__(self, msg="empty input"):
        super().__init__(msg)


class RaggedRecordsError(RecordError):
    """Records disagree on the number of classes."""


class SimplexError(RecordError):
    def __init__(self, row: int, total: float):
        self.row = row
        self.total = total
        super().__init__(f"row {row}: probabilities sum to {total:.9g}, off the simplex by more than {SIMPLEX_TOL:g}")


def simplex_violation(values: np.ndarray) -> np.ndarray:
    """Per-row distance from the probability simplex (sum error or out-of-range entry)."""
    below = np.clip(-values, 0.0, None).max(axis=1)
    above = np.clip(values - 1.0, 0.0, None).max(axis=1)
    return np.maximum(np.abs(values.sum(axis=1) - 1.0), np.maximum(below, above))


@dataclass(frozen=True, eq=False)
class PredictionRecord:
    """One classified sample: a probability vector and its true label."""

    probabilities: np.ndarray
    true_label: int

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise RecordError("probabilities must be a non-empty 1-d vector")
        if not np.all(np.isfinite(p)) or p.min() < 0.0 or p.max() > 1.0 + SIMPLEX_TOL:
            raise RecordError(f"probabilities must lie in [0, 1]: {p}")
        if abs(p.sum() - 1.0) > SIMPLEX_TOL:
            raise RecordError(f"probabilities sum to {p.sum():.9g}, not 1")
        _check_label(self.true_label, p.size)
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "true_label", int(self.true_label))

    @property
    def class_count(self) -> int:
        return self.probabilities.size

    def __eq__(self, other):
        if not isinstance(other, PredictionRecord):
            return NotImplemented
        return self.true_label == other.true_label and np.array_equal(self.probabilities, other.probabilities)


@dataclass(frozen=True, eq=False)
class LogitRecord:
    """Raw pre-softmax scores and the true label."""

    logits: np.ndarray
    true_label: int

    def __post_init__(self):
        z = np.asarray(self.logits, dtype=float)
        if z.ndim != 1 or z.size == 0:
            raise RecordError("logits must be a non-empty 1-d vector")
        if not np.all(np.isfinite(z)):
            raise RecordError(f"logits must be finite: {z}")
        _check_label(self.true_label, z.size)
        z.setflags(write=False)
        object.__setattr__(self, "logits", z)
        object.__setattr__(self, "true_label", int(self.true_label))

    @property
    def class_count(self) -> int:
        return self.logits.size


def _check_label(label, c):
    if int(label) != label or not 0 <= int(label) < c:
        raise RecordError(f"true label {label!r} outside [0, {c})")


class RecordFile:
    """An ordered batch of records of one variant, stored as arrays.

    Parameters
    ----------
    kind : {"probs", "logits"}
    values : array_like, shape (N, C)
        Probability rows or logit rows.
    labels : array_like of int, shape (N,)
    truth : array_like, shape (N, C), optional
        Ground-truth class probabilities from the synthetic generator. Never
        used as model input; kept only for oracle checks.
    """

    def __init__(self, kind: str, values, labels, truth=None):
        if kind not in (PROBS, LOGITS):
            raise ValueError(f"unknown record kind {kind!r}")
        values = np.asarray(values, dtype=float)
        labels = np.asarray(labels)
        if values.ndim != 2:
            raise RaggedRecordsError("values must be a 2-d (records x classes) array")
        if labels.shape != (values.shape[0],):
            raise RecordError("labels must have one entry per row")
        if labels.size and (not np.issubdtype(labels.dtype, np.integer)):
            if not np.all(labels == np.round(labels)):
                raise RecordError("labels must be integers")
        labels = labels.astype(np.int64)
        c = values.shape[1]
        if labels.size:
            bad = np.flatnonzero((labels < 0) | (labels >= c))
            if bad.size:
                raise RecordError(f"row {bad[0]}: true label {labels[bad[0]]} outside [0, {c})")
            if not np.all(np.isfinite(values)):
                raise RecordError(f"row {np.flatnonzero(~np.isfinite(values).all(1))[0]}: non-finite value")
            if kind == PROBS:
                bad = np.flatnonzero(simplex_violation(values) > SIMPLEX_TOL)
                if bad.size:
                    raise SimplexError(int(bad[0]), float(values[bad[0]].sum()))
        self.kind = kind
        self.values = values
        self.labels = labels
        self.truth = None if truth is None else np.asarray(truth, dtype=float)

    @property
    def class_count(self) -> int:
        return self.values.shape[1]

    @property
    def format(self) -> str:
        return self.kind

    def __len__(self):
        return self.values.shape[0]

    def __iter__(self) -> Iterator[Union[PredictionRecord, LogitRecord]]:
        for i in range(len(self)):
            yield self[i]

    def __getitem__(self, i):
        if self.kind == PROBS:
            return PredictionRecord(self.values[i], int(self.labels[i]))
        return LogitRecord(self.values[i], int(self.labels[i]))

    def __repr__(self):
        return f"RecordFile(kind={self.kind!r}, records={len(self)}, classes={self.class_count})"

    @classmethod
    def from_records(cls, records: Iterable[Union[PredictionRecord, LogitRecord]]) -> RecordFile:
        records = list(records)
        if not records:
            raise EmptyInputError()
        kinds = {type(r) for r in records}
        if len(kinds) != 1:
            raise RecordError("cannot mix probability and logit records")
        kind = PROBS if kinds.pop() is PredictionRecord else LOGITS
        attr = "probabilities" if kind == PROBS else "logits"
        c = records[0].class_count
        for i, r in enumerate(records):
            if r.class_count != c:
                raise RaggedRecordsError(f"record {i} has {r.class_count} classes, expected {c}")
        values = np.stack([getattr(r, attr) for r in records])
        return cls(kind, values, [r.true_label for r in records])


RecordsLike = Union[RecordFile, Iterable[PredictionRecord], Iterable[LogitRecord]]


def as_arrays(records: RecordsLike, kind: str) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(values, labels)`` for a batch, requiring the given variant."""
    if not isinstance(records, RecordFile):
        records = RecordFile.from_records(records)
    if records.kind != kind:
        raise RecordError(f"expected {kind} records, got {records.kind}")
    if len(records) == 0:
        raise EmptyInputError()
    return records.values, records.labels
