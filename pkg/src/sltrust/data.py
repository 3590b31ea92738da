"""Prediction-log files, synthetic logs, and report output.

Record files come in two variants, each as CSV or JSONL:

* probability: CSV header ``label,prob_0,...,prob_{C-1}``; JSONL ``{"label": 1, "probs": [...]}``
* logit:       CSV header ``label,logit_0,...``;           JSONL ``{"label": 1, "logits": [...]}``

Synthetic files may also carry the generator's ground-truth class
probabilities (CSV ``true_p_*`` columns, JSONL ``"true_probs"``). Readers keep
them on ``RecordFile.truth`` and never treat them as model output.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .records import (
    LOGITS,
    PROBS,
    SIMPLEX_TOL,
    EmptyInputError,
    RecordError,
    RecordFile,
    SimplexError,
    simplex_violation,
)

_PREFIX = {PROBS: "prob_", LOGITS: "logit_"}
_TRUTH_PREFIX = "true_p_"
_JSON_KEY = {PROBS: "probs", LOGITS: "logits"}


class ParseError(RecordError):
    def __init__(self, path, line: int, msg: str):
        self.path = str(path)
        self.line = line
        super().__init__(f"{path}:{line}: {msg}")


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _is_jsonl(path) -> bool:
    return Path(path).suffix.lower() in (".jsonl", ".json", ".ndjson")


def read_records(path, format: str = "auto") -> RecordFile:
    """Read and validate a record file.

    ``format`` is ``"auto"`` (from the CSV header or JSONL keys), ``"probs"``
    or ``"logits"``. Probability rows within 1e-6 of the simplex are
    renormalised; rows further off raise :class:`SimplexError`.
    """
    if format not in ("auto", PROBS, LOGITS):
        raise ValueError(f"unknown format {format!r}")
    kind, values, labels, truth = (_read_jsonl if _is_jsonl(path) else _read_csv)(path, format)
    if not labels:
        raise EmptyInputError(f"{path}: empty input")
    values = np.array(values, dtype=float)
    if kind == PROBS:
        bad = np.flatnonzero(simplex_violation(values) > SIMPLEX_TOL)
        if bad.size:
            raise SimplexError(int(bad[0]), float(values[bad[0]].sum()))
        values = np.clip(values, 0.0, None)
        values = values / values.sum(axis=1, keepdims=True)
    try:
        return RecordFile(kind, values, labels, truth=None if truth is None else np.array(truth))
    except RecordError as exc:
        raise RecordError(f"{path}: {exc}") from None


def _read_csv(path, format):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            return format, [], [], None
        header = [h.strip() for h in header]
        if not header or header[0] != "label":
            raise ParseError(path, 1, "header must start with 'label'")
        cols = header[1:]
        value_cols = [i for i, h in enumerate(cols) if not h.startswith(_TRUTH_PREFIX)]
        truth_cols = [i for i, h in enumerate(cols) if h.startswith(_TRUTH_PREFIX)]
        if not value_cols:
            raise ParseError(path, 1, "no value columns")
        kinds = {k for k, p in _PREFIX.items() if all(cols[i].startswith(p) for i in value_cols)}
        if not kinds:
            raise ParseError(path, 1, f"value columns must all be prob_* or logit_*: {cols}")
        kind = kinds.pop()
        if format != "auto" and format != kind:
            raise ParseError(path, 1, f"expected {format} columns, found {kind}")
        if truth_cols and len(truth_cols) != len(value_cols):
            raise ParseError(path, 1, "ground-truth columns must match value columns")

        values, labels, truth = [], [], []
        width = len(header)
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != width:
                raise ParseError(path, lineno, f"expected {width} fields, got {len(row)}")
            try:
                label = _parse_label(row[0])
                nums = [float(c) for c in row[1:]]
            except ValueError as exc:
                raise ParseError(path, lineno, str(exc)) from None
            labels.append(label)
            values.append([nums[i] for i in value_cols])
            if truth_cols:
                truth.append([nums[i] for i in truth_cols])
    return kind, values, labels, (truth or None)


def _parse_label(text) -> int:
    if isinstance(text, bool):
        raise ValueError(f"invalid label {text!r}")
    if isinstance(text, int):
        return text
    v = float(text)
    if v != int(v):
        raise ValueError(f"label {text!r} is not an integer")
    return int(v)


def _read_jsonl(path, format):
    values, labels, truth = [], [], []
    kind = None
    width = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, lineno, f"invalid JSON: {exc.msg}") from None
            if not isinstance(obj, dict) or "label" not in obj:
                raise ParseError(path, lineno, "expected an object with a 'label' key")
            present = [k for k, key in _JSON_KEY.items() if key in obj]
            if len(present) != 1:
                raise ParseError(path, lineno, "expected exactly one of 'probs' or 'logits'")
            row_kind = present[0]
            if format != "auto" and row_kind != format:
                raise ParseError(path, lineno, f"expected {format} record, found {row_kind}")
            if kind is None:
                kind = row_kind
            elif row_kind != kind:
                raise ParseError(path, lineno, "mixed probability and logit records")
            vec = obj[_JSON_KEY[row_kind]]
            try:
                vec = [float(v) for v in vec]
                label = _parse_label(obj["label"])
            except (TypeError, ValueError) as exc:
                raise ParseError(path, lineno, str(exc)) from None
            if width is None:
                width = len(vec)
            elif len(vec) != width:
                raise ParseError(path, lineno, f"expected {width} values, got {len(vec)}")
            values.append(vec)
            labels.append(label)
            if "true_probs" in obj:
                truth.append([float(v) for v in obj["true_probs"]])
    if truth and len(truth) != len(labels):
        raise ParseError(path, lineno, "ground truth present on some records only")
    return kind or (format if format != "auto" else PROBS), values, labels, (truth or None)


def write_records(rf: RecordFile, path, include_truth: bool = True) -> None:
    """Write a record file as CSV or JSONL (by extension), 12 significant digits."""
    truth = rf.truth if include_truth else None
    path = Path(path)
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            if _is_jsonl(path):
                key = _JSON_KEY[rf.kind]
                for i in range(len(rf)):
                    obj = {"label": int(rf.labels[i]), key: [float(_fmt(v)) for v in rf.values[i]]}
                    if truth is not None:
                        obj["true_probs"] = [float(_fmt(v)) for v in truth[i]]
                    fh.write(json.dumps(obj) + "\n")
            else:
                w = csv.writer(fh, lineterminator="\n")
                c = rf.class_count
                header = ["label"] + [f"{_PREFIX[rf.kind]}{j}" for j in range(c)]
                if truth is not None:
                    header += [f"{_TRUTH_PREFIX}{j}" for j in range(c)]
                w.writerow(header)
                for i in range(len(rf)):
                    row = [int(rf.labels[i])] + [_fmt(v) for v in rf.values[i]]
                    if truth is not None:
                        row += [_fmt(v) for v in truth[i]]
                    w.writerow(row)
    except OSError as exc:
        raise OSError(f"cannot write records to {path}: {exc.strerror or exc}") from exc


@dataclass(frozen=True)
class SynthSpec:
    """Synthetic prediction log parameters.

    ``sharpening`` k scales log-probabilities into logits: k = 1 gives a
    calibrated log, k > 1 an overconfident one, k < 1 an underconfident one.
    """

    sample_count: int
    class_count: int = 10
    sharpening: float = 1.0
    concentration: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be at least 1")
        if self.class_count < 2:
            raise ValueError("class_count must be at least 2")
        if not self.sharpening > 0:
            raise ValueError("sharpening must be positive")
        if not self.concentration > 0:
            raise ValueError("concentration must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def synth_generate(spec: SynthSpec) -> RecordFile:
    """Draw a logit log with known ground truth.

    Per record: ``p ~ Dirichlet(concentration)``, ``label ~ Categorical(p)``,
    ``logits = sharpening * log p``. Randomness comes from numpy's PCG64 bit
    generator seeded with ``spec.seed``; Dirichlet draws are taken for all
    records first, then one uniform per record for the label by inverse CDF,
    so output is stable across platforms for a given numpy version.
    """
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    n, c = spec.sample_count, spec.class_count
    p = rng.dirichlet(np.full(c, spec.concentration), size=n)
    u = rng.random(n)
    labels = np.minimum((np.cumsum(p, axis=1) < u[:, None]).sum(axis=1), c - 1)
    logits = spec.sharpening * np.log(np.maximum(p, np.finfo(float).tiny))
    return RecordFile(LOGITS, logits, labels, truth=p)


def write_report(report, path) -> None:
    """Write a trust report as a versioned JSON document."""
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc.strerror or exc}") from exc


CURVE_HEADER = ["tag", "class", "belief", "disbelief", "uncertainty", "projected"]


def write_curves(tagged: Iterable[tuple[str, object]], path) -> None:
    """Write per-class and network opinions of tagged reports as CSV rows."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CURVE_HEADER)
            for tag, report in tagged:
                rows = [(str(c), op) for c, op in enumerate(report.class_opinions)]
                rows.append(("network", report.network))
                for name, op in rows:
                    w.writerow([tag, name] + [_fmt(v) for v in (op.belief, op.disbelief, op.uncertainty, op.projected)])
    except OSError as exc:
        raise OSError(f"cannot write curves to {path}: {exc.strerror or exc}") from exc
