"""Coined discrete-time quantum walk under dephasing noise, with tools to
separate position-induced from environment-induced recurrences."""

from .errors import (
    ConfigError,
    IntegrityError,
    QwalkError,
    ShapeError,
    UnsupportedError,
    UsageError,
)
from .linalg import (
    DensityOperator,
    hermitian_eigensystem,
    matmul,
    partial_trace,
    purity,
    trace_norm_distance,
    von_neumann_entropy,
)
from .noise import (
    KrausPair,
    NoiseModel,
    OrnsteinUhlenbeckNoise,
    PowerLawNoise,
    RandomTelegraphNoise,
    Regime,
    autocorrelation,
    classify_regime,
    decoherence,
    kraus_pair,
    oun_decoherence,
    pln_decoherence,
    rtn_decoherence,
)
from .observables import (
    PairedRun,
    TimeSeries,
    backflow_sum,
    classical_walk_variance,
    full_trace_distance_series,
    mutual_information,
    mutual_information_run,
    mutual_information_series,
    paired_coin_run,
    position_distribution,
    trace_distance_series,
    variance,
    variance_series,
)
from .spectral import (
    DEFAULT_PRIMARY_BAND,
    DEFAULT_SECONDARY_BAND,
    MonotoneFit,
    Peak,
    Spectrum,
    band_power,
    band_power_ratio,
    detect_peaks,
    exponential_fit,
    filtered_spectrum,
    nonincreasing_fit,
    power_spectrum,
)
from .walk import (
    COIN_MINUS,
    COIN_PLUS,
    COIN_SYMMETRIC,
    TIMING_CUMULATIVE,
    TIMING_STEPWISE,
    WalkConfig,
    WalkOperators,
    apply_coin_dephasing,
    build_operators,
    coin_operator,
    initial_state,
    noisy_step,
    run_walk,
    unitary_step,
)

__version__ = "0.1.0"
