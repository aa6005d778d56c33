"""Monte Carlo estimation of erasure-channel thresholds for bivariate
bicycle and toric codes, with BP-OSD decoding, fair MWPM baselines,
pseudo-threshold search, and finite-size-scaling extrapolation."""

from .gf2 import BinaryMatrix, in_rowspace, matmul, rank, row_reduce, solve
from .codes import (
    CssCode,
    Monomial,
    build_bb_code,
    build_toric_code,
    get_code,
    logical_failure,
    registry_names,
)
from .erasure import ErasureSample, sample_erasure, syndromes
from .bposd import (
    BpOsdConfig,
    SoftDecision,
    bp_min_sum,
    decode_sector,
    osd_cs,
    priors_from_erasure,
)
from .matching import (
    MatchingGraph,
    build_matching_graph,
    mwpm_decode,
    weights_erasure_aware,
    weights_uninformed,
)
from .montecarlo import (
    WerPoint,
    derive_shot_seed,
    estimate_wer,
    stable_point_id,
    wilson_interval,
)
from .threshold import (
    NoCrossingError,
    ThresholdResult,
    bootstrap_pstar_ci,
    bracket_upward,
    find_threshold,
    illinois_refine,
)
from .fss import (
    FssDataset,
    FssResult,
    LinearizedFit,
    bootstrap_fss,
    fit_collapse,
    fit_linearized,
    window_sensitivity,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryMatrix",
    "BpOsdConfig",
    "CssCode",
    "ErasureSample",
    "FssDataset",
    "FssResult",
    "LinearizedFit",
    "MatchingGraph",
    "Monomial",
    "NoCrossingError",
    "SoftDecision",
    "ThresholdResult",
    "WerPoint",
    "bootstrap_fss",
    "bootstrap_pstar_ci",
    "bp_min_sum",
    "bracket_upward",
    "build_bb_code",
    "build_matching_graph",
    "build_toric_code",
    "decode_sector",
    "derive_shot_seed",
    "estimate_wer",
    "find_threshold",
    "fit_collapse",
    "fit_linearized",
    "get_code",
    "illinois_refine",
    "in_rowspace",
    "logical_failure",
    "matmul",
    "mwpm_decode",
    "osd_cs",
    "priors_from_erasure",
    "rank",
    "registry_names",
    "row_reduce",
    "sample_erasure",
    "solve",
    "stable_point_id",
    "syndromes",
    "weights_erasure_aware",
    "weights_uninformed",
    "wilson_interval",
    "window_sensitivity",
]
