"""Trust quantification for probabilistic classifiers with subjective logic."""

__version__ = "0.1.0"

from .calibration import BinningScheme, EceResult, assign_bin, assign_bins, compute_ece, make_uniform_bins
from .data import SynthSpec, read_records, synth_generate, write_curves, write_records, write_report
from .fusion import DualDogmaticError, FusionOutcome, cumulative_fuse, cumulative_fuse_all, fuse_evidence
from .opinion import (
    BinomialOpinion,
    DogmaticOpinionError,
    Evidence,
    OpinionError,
    PriorConfig,
    evidence_from_opinion,
    opinion_from_evidence,
    projected_probability,
    validate_opinion,
)
from .records import EmptyInputError, LogitRecord, PredictionRecord, RecordError, RecordFile
from .temperature import (
    DegenerateInputError,
    TemperatureFit,
    apply_temperature,
    apply_temperature_all,
    fit_temperature,
    mean_nll,
)
from .trust import (
    EvidenceGrid,
    QuantifierConfig,
    StreamingSession,
    TrustReport,
    accumulate_evidence,
    class_opinion,
    network_opinion,
    new_session,
    quantify,
    snapshot,
    update,
)
