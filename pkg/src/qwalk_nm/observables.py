"""Per-step scalar observables of walk runs.

Everything here consumes the state stream produced by
:func:`qwalk_nm.walk.run_walk` and reduces it to time series: position
distributions and variance, trace distance between a pair of runs started
from the orthogonal coins (|0> +/- |1>)/sqrt(2), coin-position mutual
information, and the total positive increase of a series (the discrete
backflow witness).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

import numpy as np

from .errors import IntegrityError, UsageError
from .linalg import DensityOperator, partial_trace, trace_norm_distance, von_neumann_entropy
from .noise import NoiseModel
from .walk import COIN_MINUS, COIN_PLUS, TIMING_STEPWISE, WalkConfig, run_walk


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """A named per-step record of one scalar observable."""

    name: str
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        if not np.all(np.isfinite(v)):
            raise IntegrityError(f"non-finite values in series {self.name!r}")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True, eq=False)
class PairedRun:
    """Reduced coin states of two runs from the coins (|0> +/- |1>)/sqrt(2),
    evolved under identical noise and coin angle."""

    rho_plus: np.ndarray   # (T+1, 2, 2)
    rho_minus: np.ndarray  # (T+1, 2, 2)
    metadata: dict = field(default_factory=dict)


def run_metadata(cfg: WalkConfig, noise: Optional[NoiseModel],
                 timing: str = TIMING_STEPWISE) -> dict:
    meta = {
        "steps": cfg.steps,
        "coin_angle": cfg.coin_angle,
        "initial_coin": [complex(c) for c in cfg.initial_coin],
        "noise": None if noise is None else {"kind": noise.kind, **noise.params()},
        "noise_timing": timing,
    }
    return meta


def position_distribution(rho: DensityOperator) -> np.ndarray:
    """P(x) = Tr_coin <x| rho |x> over the lattice sites."""
    t = rho.as_tensor()
    dist = np.einsum("cxcx->x", t).real
    total = dist.sum()
    if abs(total - 1.0) > 1e-10:
        raise IntegrityError(f"position distribution sums to {total!r}")
    if dist.min() < -1e-12:
        raise IntegrityError(f"negative probability {dist.min():.3e}")
    return dist


def variance(dist: np.ndarray, positions: np.ndarray) -> float:
    """Second central moment of a normalized distribution over sites."""
    dist = np.asarray(dist, dtype=np.float64)
    positions = np.asarray(positions, dtype=np.float64)
    if dist.shape != positions.shape:
        raise UsageError(f"distribution/lattice shape mismatch {dist.shape} vs {positions.shape}")
    total = dist.sum()
    if abs(total - 1.0) > 1e-8:
        raise IntegrityError(f"distribution not normalized, sum {total!r}")
    mean = float(np.dot(positions, dist))
    return float(np.dot(positions * positions, dist)) - mean * mean


def classical_walk_variance(t: float) -> float:
    """Variance of an unbiased unit-step classical walk after t steps."""
    if t < 0:
        raise UsageError("step count must be >= 0")
    return float(t)


def mutual_information(rho: DensityOperator) -> float:
    """Coin-position mutual information S(c) + S(p) - S(cp), in bits."""
    s_coin = von_neumann_entropy(partial_trace(rho, "coin"))
    s_pos = von_neumann_entropy(partial_trace(rho, "position"))
    s_full = von_neumann_entropy(rho)
    return s_coin + s_pos - s_full


def mutual_information_series(states: Iterable[DensityOperator],
                              metadata: Optional[dict] = None) -> TimeSeries:
    """Mutual information at every step of a run (streamed, full states
    are not retained)."""
    values = [mutual_information(rho) for rho in states]
    return TimeSeries("mutual_information", np.array(values), dict(metadata or {}))


def variance_series(cfg: WalkConfig, noise: Optional[NoiseModel] = None,
                    timing: str = TIMING_STEPWISE) -> TimeSeries:
    """Position variance at every step of a run."""
    pos = cfg.positions
    values = [variance(position_distribution(rho), pos)
              for rho in run_walk(cfg, noise, timing)]
    return TimeSeries("variance", np.array(values), run_metadata(cfg, noise, timing))


def mutual_information_run(cfg: WalkConfig, noise: Optional[NoiseModel] = None,
                           timing: str = TIMING_STEPWISE) -> TimeSeries:
    """Run a walk and record its mutual information series."""
    return mutual_information_series(run_walk(cfg, noise, timing),
                                     run_metadata(cfg, noise, timing))


def paired_coin_run(cfg: WalkConfig, noise: Optional[NoiseModel] = None,
                    timing: str = TIMING_STEPWISE) -> PairedRun:
    """Evolve the (plus, minus) coin pair and record reduced coin states."""
    plus_cfg = replace(cfg, initial_coin=COIN_PLUS.copy())
    minus_cfg = replace(cfg, initial_coin=COIN_MINUS.copy())
    coins_plus = np.empty((cfg.steps + 1, 2, 2), dtype=np.complex128)
    coins_minus = np.empty_like(coins_plus)
    for n, rho in enumerate(run_walk(plus_cfg, noise, timing)):
        coins_plus[n] = partial_trace(rho, "coin").matrix
    for n, rho in enumerate(run_walk(minus_cfg, noise, timing)):
        coins_minus[n] = partial_trace(rho, "coin").matrix
    return PairedRun(coins_plus, coins_minus, run_metadata(cfg, noise, timing))


def trace_distance_series(pair: PairedRun) -> TimeSeries:
    """Trace distance between the paired reduced coin states per step."""
    if pair.rho_plus.shape != pair.rho_minus.shape:
        raise UsageError("paired runs have mismatched lengths")
    values = [
        trace_norm_distance(DensityOperator(p, (2, 1)), DensityOperator(m, (2, 1)))
        for p, m in zip(pair.rho_plus, pair.rho_minus)
    ]
    return TimeSeries("trace_distance", np.array(values), dict(pair.metadata))


def full_trace_distance_series(cfg: WalkConfig, noise: Optional[NoiseModel] = None,
                               timing: str = TIMING_STEPWISE) -> TimeSeries:
    """Trace distance of the paired runs on the full coin x position space.

    Under noiseless evolution this is constant (unitary invariance); any
    contraction is caused by the channel, not by the walk.
    """
    plus_cfg = replace(cfg, initial_coin=COIN_PLUS.copy())
    minus_cfg = replace(cfg, initial_coin=COIN_MINUS.copy())
    values = [
        trace_norm_distance(rp, rm)
        for rp, rm in zip(run_walk(plus_cfg, noise, timing),
                          run_walk(minus_cfg, noise, timing))
    ]
    return TimeSeries("full_trace_distance", np.array(values),
                      run_metadata(cfg, noise, timing))


def backflow_sum(series: TimeSeries | np.ndarray) -> float:
    """Total positive increase sum_n max(0, x_{n+1} - x_n) of a series.

    Zero for any non-increasing sequence; strictly positive whenever the
    series ever rises, which for distinguishability series signals
    information backflow.
    """
    values = series.values if isinstance(series, TimeSeries) else np.asarray(series, float)
    if len(values) < 2:
        raise UsageError("series must have length >= 2")
    diffs = np.diff(values)
    return float(np.sum(diffs[diffs > 0.0]))
