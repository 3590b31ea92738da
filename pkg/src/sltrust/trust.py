"""Evidence-based trust quantification of a probabilistic classifier.

For every class c the class-c probability of each record is dropped into one
of M uniform clusters. Per (class, cluster) cell we count

* ``n`` - records whose class-c probability falls in the cluster,
* ``t`` - those among them whose true label is c,

and derive positive evidence ``r = t`` and negative evidence

    s = alpha * max(0, t - n*RP) + beta * max(0, n*RP - t)

where RP is the cluster midpoint. Cells become opinions through the
evidence mapping; cells fuse into class opinions and classes into the network
opinion by cumulative fusion, done as evidence addition.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .calibration import (
    BinningScheme,
    EceResult,
    assign_bins,
    ece_from_arrays,
    ece_from_sums,
    make_uniform_bins,
)
from .opinion import BinomialOpinion, Evidence, PriorConfig, opinion_from_evidence
from .records import PROBS, PredictionRecord, RaggedRecordsError, RecordsLike, as_arrays

REPORT_VERSION = 1


@dataclass(frozen=True)
class QuantifierConfig:
    """Trust quantifier settings.

    ``alpha`` weighs cells where more true labels were seen than the cluster
    midpoint predicts, ``beta`` the opposite. ``ece_bins`` defaults to
    ``bin_count``.
    """

    bin_count: int = 10
    alpha: float = 1.0
    beta: float = 1.0
    prior: PriorConfig = field(default_factory=PriorConfig)
    ece_bins: Optional[int] = None

    def __post_init__(self):
        if int(self.bin_count) != self.bin_count or self.bin_count < 1:
            raise ValueError(f"bin_count must be a positive integer, got {self.bin_count!r}")
        if self.ece_bins is not None and (int(self.ece_bins) != self.ece_bins or self.ece_bins < 1):
            raise ValueError(f"ece_bins must be a positive integer, got {self.ece_bins!r}")
        if not (self.alpha >= 0 and self.beta >= 0):
            raise ValueError(f"alpha and beta must be non-negative, got {self.alpha!r}, {self.beta!r}")

    @property
    def scheme(self) -> BinningScheme:
        return make_uniform_bins(self.bin_count)

    @property
    def ece_scheme(self) -> BinningScheme:
        return make_uniform_bins(self.ece_bins or self.bin_count)

    def to_dict(self) -> dict:
        return {
            "bins": self.bin_count,
            "ece_bins": self.ece_bins or self.bin_count,
            "alpha": self.alpha,
            "beta": self.beta,
            "prior_weight": self.prior.prior_weight,
            "base_rate": self.prior.base_rate,
        }


def negative_evidence(n, t, rep, alpha=1.0, beta=1.0):
    """Penalty for the gap between observed hits ``t`` and expected ``n * rep``."""
    expected = np.asarray(n, dtype=float) * rep
    t = np.asarray(t, dtype=float)
    return alpha * np.maximum(0.0, t - expected) + beta * np.maximum(0.0, expected - t)


@dataclass(frozen=True, eq=False)
class EvidenceGrid:
    """Per (class, cluster) counters, each array shaped (C, M)."""

    n: np.ndarray
    t: np.ndarray
    r: np.ndarray
    s: np.ndarray
    representatives: np.ndarray

    @classmethod
    def from_counts(cls, n, t, config: QuantifierConfig) -> EvidenceGrid:
        n = np.asarray(n, dtype=np.int64)
        t = np.asarray(t, dtype=np.int64)
        reps = config.scheme.representatives
        return cls(n, t, t.astype(float), negative_evidence(n, t, reps, config.alpha, config.beta), reps)

    @property
    def class_count(self) -> int:
        return self.n.shape[0]

    @property
    def bin_count(self) -> int:
        return self.representatives.size

    def cell_evidence(self, c: int, i: int) -> Evidence:
        return Evidence(self.r[c, i], self.s[c, i])

    def class_evidence(self, c: int) -> Evidence:
        if not 0 <= c < self.class_count:
            raise IndexError(f"class {c} outside [0, {self.class_count})")
        return Evidence(self.r[c].sum(), self.s[c].sum())

    def total_evidence(self) -> Evidence:
        return Evidence(self.r.sum(), self.s.sum())


def accumulate_evidence(records: RecordsLike, config: QuantifierConfig = QuantifierConfig()) -> EvidenceGrid:
    probs, labels = as_arrays(records, PROBS)
    return accumulate_evidence_arrays(probs, labels, config)


def accumulate_evidence_arrays(probs: np.ndarray, labels: np.ndarray, config: QuantifierConfig) -> EvidenceGrid:
    n, t = _count_cells(probs, labels, config.scheme)
    return EvidenceGrid.from_counts(n, t, config)


def _count_cells(probs: np.ndarray, labels: np.ndarray, scheme: BinningScheme):
    c = probs.shape[1]
    m = scheme.bin_count
    flat = assign_bins(probs, scheme) + (np.arange(c) * m)[None, :]
    hits = labels[:, None] == np.arange(c)[None, :]
    n = np.bincount(flat.ravel(), minlength=c * m).reshape(c, m)
    t = np.bincount(flat[hits], minlength=c * m).reshape(c, m)
    return n, t


def class_opinion(grid: EvidenceGrid, c: int, config: QuantifierConfig = QuantifierConfig()) -> BinomialOpinion:
    return opinion_from_evidence(grid.class_evidence(c), config.prior)


def network_opinion(grid: EvidenceGrid, config: QuantifierConfig = QuantifierConfig()) -> BinomialOpinion:
    return opinion_from_evidence(grid.total_evidence(), config.prior)


@dataclass(frozen=True, eq=False)
class TrustReport:
    config: QuantifierConfig
    grid: EvidenceGrid
    cluster_opinions: list[list[BinomialOpinion]]
    class_opinions: list[BinomialOpinion]
    network: BinomialOpinion
    ece: Optional[EceResult]

    @property
    def class_count(self) -> int:
        return self.grid.class_count

    @property
    def record_count(self) -> int:
        return int(self.grid.n[0].sum()) if self.class_count else 0

    @property
    def vacuous_classes(self) -> list[int]:
        return [c for c, op in enumerate(self.class_opinions) if op.is_vacuous]

    def to_dict(self) -> dict:
        g = self.grid
        classes = []
        for c, op in enumerate(self.class_opinions):
            clusters = [
                {
                    "bin": i,
                    "representative": float(g.representatives[i]),
                    "n": int(g.n[c, i]),
                    "t": int(g.t[c, i]),
                    "r": float(f"{g.r[c, i]:.12g}"),
                    "s": float(f"{g.s[c, i]:.12g}"),
                    "opinion": self.cluster_opinions[c][i].to_dict(),
                }
                for i in range(g.bin_count)
            ]
            classes.append({"class": c, "vacuous": op.is_vacuous, "opinion": op.to_dict(), "clusters": clusters})
        return {
            "version": REPORT_VERSION,
            "config": self.config.to_dict(),
            "records": self.record_count,
            "ece": None if self.ece is None else self.ece.to_dict(),
            "classes": classes,
            "network": {"opinion": self.network.to_dict()},
        }

    def summary(self) -> str:
        """Fixed-layout, human-readable digest of the report."""
        net = self.network
        lines = [
            f"records      {self.record_count}",
            f"classes      {self.class_count}",
            f"bins         {self.config.bin_count}",
            f"ece          {self.ece.ece:.6f}" if self.ece is not None else "ece          n/a",
            f"belief       {net.belief:.6f}",
            f"disbelief    {net.disbelief:.6f}",
            f"uncertainty  {net.uncertainty:.6f}",
            f"projected    {net.projected:.6f}",
        ]
        if self.vacuous_classes:
            lines.append("vacuous      " + ",".join(map(str, self.vacuous_classes)))
        return "\n".join(lines)


def build_report(grid: EvidenceGrid, config: QuantifierConfig, ece: Optional[EceResult]) -> TrustReport:
    prior = config.prior
    cells = [
        [opinion_from_evidence(grid.cell_evidence(c, i), prior) for i in range(grid.bin_count)]
        for c in range(grid.class_count)
    ]
    classes = [class_opinion(grid, c, config) for c in range(grid.class_count)]
    return TrustReport(config, grid, cells, classes, network_opinion(grid, config), ece)


def quantify(records: RecordsLike, config: QuantifierConfig = QuantifierConfig()) -> TrustReport:
    """Trust report for a batch of probability records."""
    probs, labels = as_arrays(records, PROBS)
    grid = accumulate_evidence_arrays(probs, labels, config)
    return build_report(grid, config, ece_from_arrays(probs, labels, config.ece_scheme))


class StreamingSession:
    """Incrementally maintained trust counters.

    The class count is fixed by the first record. ``update`` mutates the
    session and must not run concurrently with another ``update``;
    ``snapshot`` copies the counters first.
    """

    def __init__(self, config: QuantifierConfig = QuantifierConfig(), class_count: Optional[int] = None):
        self.config = config
        self._scheme = config.scheme
        self._ece_scheme = config.ece_scheme
        self.class_count = None
        self.records_seen = 0
        m = config.ece_scheme.bin_count
        self._ece_counts = np.zeros(m, dtype=np.int64)
        self._ece_conf = np.zeros(m)
        self._ece_hits = np.zeros(m, dtype=np.int64)
        self._n = self._t = None
        if class_count is not None:
            self._init_classes(class_count)

    def _init_classes(self, c: int):
        self.class_count = int(c)
        self._n = np.zeros((c, self._scheme.bin_count), dtype=np.int64)
        self._t = np.zeros((c, self._scheme.bin_count), dtype=np.int64)

    def update(self, record: PredictionRecord) -> StreamingSession:
        if not isinstance(record, PredictionRecord):
            record = PredictionRecord(*record)
        p = record.probabilities
        if self.class_count is None:
            self._init_classes(p.size)
        elif p.size != self.class_count:
            raise RaggedRecordsError(f"record has {p.size} classes, session expects {self.class_count}")
        bins = assign_bins(p, self._scheme)
        cls = np.arange(self.class_count)
        self._n[cls, bins] += 1
        self._t[record.true_label, bins[record.true_label]] += 1

        pred = int(np.argmax(p))
        conf = float(p[pred])
        b = int(assign_bins(conf, self._ece_scheme))
        self._ece_counts[b] += 1
        self._ece_conf[b] += conf
        self._ece_hits[b] += pred == record.true_label
        self.records_seen += 1
        return self

    def extend(self, records) -> StreamingSession:
        for rec in records:
            self.update(rec)
        return self

    def snapshot(self) -> TrustReport:
        if self.class_count is None:
            grid = EvidenceGrid.from_counts(np.zeros((0, self._scheme.bin_count)),
                                            np.zeros((0, self._scheme.bin_count)), self.config)
        else:
            grid = EvidenceGrid.from_counts(self._n.copy(), self._t.copy(), self.config)
        ece = None
        if self.records_seen:
            ece = ece_from_sums(self._ece_counts.copy(), self._ece_conf.copy(), self._ece_hits.copy())
        return build_report(grid, self.config, ece)

    def copy(self) -> StreamingSession:
        return copy.deepcopy(self)


def new_session(config: QuantifierConfig = QuantifierConfig(), class_count: Optional[int] = None) -> StreamingSession:
    return StreamingSession(config, class_count)


def update(session: StreamingSession, record: PredictionRecord) -> StreamingSession:
    return session.update(record)


def snapshot(session: StreamingSession) -> TrustReport:
    return session.snapshot()
