"""Spectral separation of recurrence components in a time series.

The pipeline: project the series onto the closest non-increasing sequence
(exact least-squares antitonic regression, pool-adjacent-violators),
subtract it, and take the power spectrum |DFT|^2 of the residual.  Any
structure left after removing the best monotone-decay explanation is
oscillatory, and its frequency localizes the source: here, a
high-frequency component from the coin-position interaction and, for
telegraph noise with memory, a low-frequency component from the
environment.  Band powers compare the strength of the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import UsageError
from .observables import TimeSeries

# Frequency bands (cycles/step) used to separate the two recurrence
# components; values at band edges are included.
DEFAULT_SECONDARY_BAND = (0.0, 0.1)
DEFAULT_PRIMARY_BAND = (0.2, 0.35)

FILTER_MONOTONE = "monotone"
FILTER_EXPONENTIAL = "exponential"


@dataclass(frozen=True, eq=False)
class MonotoneFit:
    """Least-squares non-increasing fit of a series and its residual."""

    fitted: np.ndarray
    residual: np.ndarray
    sse: float


@dataclass(frozen=True, eq=False)
class Peak:
    frequency: float
    power: float
    band: tuple[float, float]


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Power spectrum S(k) = |sum_n x_n exp(-2 pi i k n / N)|^2.

    ``frequencies`` are k/N in cycles/step.  ``peaks`` and ``band_powers``
    are filled in by the detection helpers; a fresh spectrum carries them
    empty.
    """

    power: np.ndarray
    frequencies: np.ndarray
    peaks: list[Peak] = field(default_factory=list)
    band_powers: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.power)


def _series_values(series: TimeSeries | Sequence[float] | np.ndarray) -> np.ndarray:
    values = series.values if isinstance(series, TimeSeries) else np.asarray(series, float)
    return np.asarray(values, dtype=np.float64)


def nonincreasing_fit(series: TimeSeries | Sequence[float] | np.ndarray) -> MonotoneFit:
    """Exact least-squares non-increasing fit via pool-adjacent-violators.

    The solution is piecewise constant on pooled blocks, each at its block
    mean, with strictly decreasing values between blocks; it is the unique
    Euclidean projection of the input onto the non-increasing cone.
    """
    y = _series_values(series)
    if y.size < 2:
        raise UsageError("monotone fit needs a series of length >= 2")
    # Pool on the negated series (non-decreasing fit), then negate back.
    neg = -y
    sums = []    # block sums
    counts = []  # block lengths
    for value in neg:
        sums.append(value)
        counts.append(1)
        # merge while the last block mean dropped below its predecessor's
        while len(sums) > 1 and sums[-1] * counts[-2] < sums[-2] * counts[-1]:
            sums[-2] += sums[-1]
            counts[-2] += counts[-1]
            sums.pop()
            counts.pop()
    fitted = -np.repeat([s / c for s, c in zip(sums, counts)], counts)
    residual = y - fitted
    return MonotoneFit(fitted=fitted, residual=residual, sse=float(np.dot(residual, residual)))


def exponential_fit(series: TimeSeries | Sequence[float] | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Fit A * b**t by least squares on the log of the positive entries.

    Returns (fitted, residual).  Offered as an alternative detrending
    filter for decay-dominated series; the monotone fit is the canonical
    one.
    """
    y = _series_values(series)
    if y.size < 2:
        raise UsageError("exponential fit needs a series of length >= 2")
    t = np.arange(y.size, dtype=np.float64)
    mask = y > 0.0
    if mask.sum() < 2:
        raise UsageError("exponential fit needs at least two positive entries")
    slope, intercept = np.polyfit(t[mask], np.log(y[mask]), 1)
    fitted = np.exp(intercept + slope * t)
    return fitted, y - fitted


def power_spectrum(series: TimeSeries | Sequence[float] | np.ndarray) -> Spectrum:
    """|DFT|^2 of a real series, all N bins, frequencies k/N.

    Computed with the FFT; Parseval and conjugate symmetry are asserted on
    every call (stripped under ``python -O``).
    """
    x = _series_values(series)
    n = x.size
    if n < 2:
        raise UsageError("power spectrum needs a series of length >= 2")
    power = np.abs(np.fft.fft(x)) ** 2
    scale = float(np.dot(x, x)) + 1e-300
    assert abs(np.sum(power) / n - np.dot(x, x)) <= 1e-9 * n * scale, "Parseval violated"
    assert np.allclose(power[1:], power[1:][::-1], rtol=1e-9, atol=1e-12 * scale), \
        "conjugate symmetry violated"
    return Spectrum(power=power, frequencies=np.arange(n) / n)


def filtered_spectrum(series: TimeSeries | Sequence[float] | np.ndarray,
                      filter_kind: str = FILTER_MONOTONE) -> Spectrum:
    """Power spectrum of the series minus its monotone (or exponential) fit.

    The k=0 bin is reported like any other but carries no oscillatory
    information; peak detection only ever looks at 0 < f <= 1/2.
    """
    if filter_kind == FILTER_MONOTONE:
        residual = nonincreasing_fit(series).residual
    elif filter_kind == FILTER_EXPONENTIAL:
        residual = exponential_fit(series)[1]
    else:
        raise UsageError(f"unknown filter kind {filter_kind!r}")
    return power_spectrum(residual)


def _band_indices(spec: Spectrum, band: tuple[float, float]) -> np.ndarray:
    lo, hi = band
    if not (0.0 <= lo < hi <= 0.5):
        raise UsageError(f"band {band} must lie within (0, 0.5]")
    # band edges inclusive, but f=0 and f>1/2 never participate
    f = spec.frequencies
    idx = np.nonzero((f > 0.0) & (f <= 0.5) & (f >= lo - 1e-12) & (f <= hi + 1e-12))[0]
    if idx.size == 0:
        raise UsageError(f"band {band} contains no frequency bins (N={spec.size})")
    return idx


def detect_peaks(spec: Spectrum, bands: Sequence[tuple[float, float]]) -> list[Peak]:
    """Significant in-band spectral peaks; at most one peak per band.

    A candidate is a bin strictly greater than both neighbors (neighbors
    taken from the full spectrum, so a band edge rising into the next band
    is not a peak).  It counts as a peak when its power exceeds the
    in-band median plus three median-absolute-deviations and is not pure
    roundoff (a relative floor of 1e-12 of the strongest in-range bin
    keeps FFT noise next to a large DC component from registering).  The
    strongest candidate wins; ties go to the lower frequency.
    """
    if not bands:
        raise UsageError("at least one band is required")
    half = spec.size // 2
    peaks: list[Peak] = []
    p = spec.power
    floor = 1e-12 * float(np.max(p[1:half + 1], initial=0.0))
    for band in bands:
        idx = _band_indices(spec, band)
        in_band = p[idx]
        median = float(np.median(in_band))
        mad = float(np.median(np.abs(in_band - median)))
        threshold = max(median + 3.0 * mad, floor)
        best: Peak | None = None
        for k in idx:
            if k < 1 or k > half:
                continue
            left = p[k - 1]
            right = p[k + 1] if k + 1 < spec.size else p[k - 1]
            if p[k] > left and p[k] > right and p[k] > threshold:
                if best is None or p[k] > best.power:
                    best = Peak(float(spec.frequencies[k]), float(p[k]), tuple(band))
        if best is not None:
            peaks.append(best)
    return peaks


def band_power(spec: Spectrum, band: tuple[float, float]) -> float:
    """Trapezoidal area under the power spectrum across a band."""
    idx = _band_indices(spec, band)
    if idx.size == 1:
        return float(spec.power[idx[0]])
    return float(np.trapezoid(spec.power[idx], spec.frequencies[idx]))


def band_power_ratio(spec: Spectrum, primary_band: tuple[float, float],
                     secondary_band: tuple[float, float]) -> float:
    """Ratio of band powers primary/secondary; +inf when the secondary
    band carries no power (callers should flag that case in any report)."""
    pi = _band_indices(spec, primary_band)
    si = _band_indices(spec, secondary_band)
    if np.intersect1d(pi, si).size:
        raise UsageError(f"bands {primary_band} and {secondary_band} overlap")
    primary = band_power(spec, primary_band)
    secondary = band_power(spec, secondary_band)
    if secondary == 0.0:
        return math.inf
    return primary / secondary
