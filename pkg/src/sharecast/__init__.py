"""Reshare-cascade popularity prediction.

A self-exciting point-process model of article reshare cascades: a baseline
predictor with fixed mean degree, an enhanced predictor that rescales
infectiousness by the cascade's own propagation speed and bounds the mean
degree per timestamp, a branching-process simulator for synthetic ground
truth, evaluation metrics, file formats, a CLI and an HTTP service.
"""

from .baseline import (
    INSUFFICIENT_DATA,
    OK,
    SUPERCRITICAL,
    InfectiousnessSeries,
    PredictionPoint,
    baseline_series,
    estimate_p,
    exposure,
    infectiousness_series,
    intensity,
    log_likelihood,
    predict_final,
)
from .enhanced import (
    DEFAULT_DEGREE_GRID,
    MODEL_TAGS,
    Recommendation,
    SpeedProfile,
    WhatIfEntry,
    WhatIfReport,
    adjust_p,
    adjusted_infectiousness,
    bound_degree,
    default_times,
    enhanced_series,
    predict_series,
    recommend_degree,
    speed_profile,
    whatif,
)
from .evaluation import (
    APE_FAILED,
    ApeHistogram,
    ape,
    ape_histogram,
    ape_of_point,
    ape_pair,
    breakout_coverage,
    median_accuracy,
)
from .io import (
    HistoryEntry,
    HistoryStore,
    ParseError,
    UserRecord,
    load_config,
    load_corpus,
    load_shares,
    load_users,
    save_config,
    save_corpus,
)
from .kernel import normalize, phi, phi_mass, sample_delay, total_mass
from .simulate import (
    CapExceededError,
    ConstantDegree,
    EmpiricalDegree,
    LognormalDegree,
    PiecewiseConstant,
    SimSpec,
    constant_p,
    mc_final_size,
    pattern_mixture,
    simulate,
    simulate_corpus,
)
from .types import (
    Cascade,
    Channel,
    InsufficientDataError,
    KernelParams,
    ModelParams,
    OutOfWindowError,
    ShareEvent,
    TimeframeSchedule,
    default_kernel,
    frame_of,
    validate_cascade,
)

__version__ = "0.1.0"
