"""Dephasing noise models for the coin: random telegraph, modified
Ornstein-Uhlenbeck and power-law noise.

Each model is a pair of 2x2 Kraus operators parameterized by the elapsed
dimensionless time (step units, all rates per step).  The scalar
decoherence factor multiplying the coin coherences is:

* random telegraph: a damped harmonic (or damped hyperbolic) function of
  nu = gamma * t whose regime is set by the ratio 2a/gamma;
* Ornstein-Uhlenbeck: exp[-(Gamma/2) (t + (exp(-gamma t) - 1)/gamma)];
* power-law (exponent 3): exp[-0.5 t (t gamma + 2) Gamma gamma / (t gamma + 1)^2].

Autocorrelation functions of the underlying classical processes are
provided for documentation and plotting; the evolution itself only uses
the Kraus operators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ConfigError, IntegrityError, UnsupportedError

SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)

MARKOVIAN = "markovian"
NON_MARKOVIAN = "non-markovian"
MINIMAL = "minimal"

# Regime boundary tolerance for 2a/gamma == 1.
_MINIMAL_RTOL = 1e-12
# Advisory bandwidth threshold (per unit step) below which OUN/PLN memory
# effects are treated as significant.
_BANDWIDTH_THRESHOLD = 0.1


def _require_positive(**rates: float) -> None:
    for name, value in rates.items():
        if not (value > 0.0) or not math.isfinite(value):
            raise ConfigError(f"{name} must be a positive finite rate, got {value!r}")


@dataclass(frozen=True)
class RandomTelegraphNoise:
    """Two-state fluctuator coupling with strength ``a``; ``gamma`` is the
    inverse of twice the flip time scale."""

    a: float
    gamma: float

    kind = "rtn"

    def __post_init__(self) -> None:
        _require_positive(a=self.a, gamma=self.gamma)

    def params(self) -> dict[str, float]:
        return {"a": self.a, "gamma": self.gamma}


@dataclass(frozen=True)
class OrnsteinUhlenbeckNoise:
    """Modified Ornstein-Uhlenbeck dephasing; ``Gamma`` is the effective
    relaxation rate, ``gamma`` the noise bandwidth (1/correlation time)."""

    Gamma: float
    gamma: float

    kind = "oun"

    def __post_init__(self) -> None:
        _require_positive(Gamma=self.Gamma, gamma=self.gamma)

    def params(self) -> dict[str, float]:
        return {"Gamma": self.Gamma, "gamma": self.gamma}


@dataclass(frozen=True)
class PowerLawNoise:
    """Power-law noise with exponent ``alpha``; only alpha=3 is implemented."""

    Gamma: float
    gamma: float
    alpha: int = 3

    kind = "pln"

    def __post_init__(self) -> None:
        _require_positive(Gamma=self.Gamma, gamma=self.gamma)
        if self.alpha != 3:
            raise UnsupportedError(f"power-law exponent {self.alpha} not supported (only 3)")

    def params(self) -> dict[str, float]:
        return {"Gamma": self.Gamma, "gamma": self.gamma, "alpha": float(self.alpha)}


NoiseModel = Union[RandomTelegraphNoise, OrnsteinUhlenbeckNoise, PowerLawNoise]


@dataclass(frozen=True)
class KrausPair:
    """The two coin-space Kraus operators at a given elapsed time."""

    k1: np.ndarray
    k2: np.ndarray
    elapsed_time: float

    def completeness_residual(self) -> float:
        """max |K1^dag K1 + K2^dag K2 - I|, zero for a trace-preserving pair."""
        s = self.k1.conj().T @ self.k1 + self.k2.conj().T @ self.k2
        return float(np.max(np.abs(s - np.eye(2))))


@dataclass(frozen=True)
class Regime:
    """Markovianity classification of a noise model.

    For random telegraph noise the discriminant is 2a/gamma and the label
    is exact.  For the other two models the label is a bandwidth heuristic
    (flagged by ``heuristic``) and never feeds back into any computation.
    """

    label: str
    discriminant: float
    heuristic: bool = False


def rtn_decoherence(noise: RandomTelegraphNoise, t: float) -> float:
    """Coin-coherence factor of random telegraph noise at elapsed time t.

    In the oscillatory regime (2a/gamma > 1) this is
    exp(-nu) [cos(nu mu) + sin(nu mu)/mu] with mu = sqrt((2a/gamma)^2 - 1)
    and nu = gamma t.  For 2a/gamma < 1 the real hyperbolic continuation
    is used, written in exponential form so large nu cannot overflow.  On
    the boundary the shared limit exp(-nu) (1 + nu) applies.  The value
    always lies in [-1, 1].
    """
    nu = noise.gamma * t
    ratio = 2.0 * noise.a / noise.gamma
    if abs(ratio - 1.0) <= _MINIMAL_RTOL:
        return math.exp(-nu) * (1.0 + nu)
    if ratio > 1.0:
        mu = math.sqrt(ratio * ratio - 1.0)
        return math.exp(-nu) * (math.cos(nu * mu) + math.sin(nu * mu) / mu)
    mu = math.sqrt(1.0 - ratio * ratio)
    # exp(-nu) [cosh(nu mu) + sinh(nu mu)/mu], expanded to avoid overflow
    return 0.5 * ((1.0 + 1.0 / mu) * math.exp(-nu * (1.0 - mu))
                  + (1.0 - 1.0 / mu) * math.exp(-nu * (1.0 + mu)))


def oun_decoherence(noise: OrnsteinUhlenbeckNoise, t: float) -> float:
    """Coin-coherence factor of Ornstein-Uhlenbeck noise; in (0, 1] and
    non-increasing in t."""
    g = noise.gamma
    return math.exp(-0.5 * noise.Gamma * (t + (math.exp(-g * t) - 1.0) / g))


def pln_decoherence(noise: PowerLawNoise, t: float) -> float:
    """Coin-coherence factor of power-law noise (exponent 3); in (0, 1]
    and non-increasing in t."""
    g = noise.gamma
    return math.exp(-0.5 * t * (t * g + 2.0) * noise.Gamma * g / (t * g + 1.0) ** 2)


def decoherence(noise: NoiseModel, t: float) -> float:
    """The scalar factor multiplying coin coherences at elapsed time t."""
    if t < 0:
        raise ConfigError(f"elapsed time must be >= 0, got {t}")
    if isinstance(noise, RandomTelegraphNoise):
        return rtn_decoherence(noise, t)
    if isinstance(noise, OrnsteinUhlenbeckNoise):
        return oun_decoherence(noise, t)
    if isinstance(noise, PowerLawNoise):
        return pln_decoherence(noise, t)
    raise ConfigError(f"unknown noise model {noise!r}")


def kraus_pair(noise: NoiseModel, t: float) -> KrausPair:
    """Coin-space Kraus operators of the dephasing channel at elapsed time t.

    Random telegraph noise uses the symmetric pair
    sqrt[(1 +/- L)/2] {I, sigma_z}; the other two use the asymmetric pair
    {|0><0| + f |1><1|, sqrt(1 - f^2) |1><1|} with their factor f.  Either
    way the induced channel leaves coin populations untouched and scales
    coherences by the factor, and the pair is complete by construction.
    """
    f = decoherence(noise, t)
    if isinstance(noise, RandomTelegraphNoise):
        k1 = math.sqrt((1.0 + f) / 2.0) * np.eye(2, dtype=np.complex128)
        k2 = math.sqrt((1.0 - f) / 2.0) * SIGMA_Z
    else:
        k1 = np.array([[1.0, 0.0], [0.0, f]], dtype=np.complex128)
        k2 = np.array([[0.0, 0.0], [0.0, math.sqrt(max(0.0, 1.0 - f * f))]],
                      dtype=np.complex128)
    pair = KrausPair(k1, k2, float(t))
    residual = pair.completeness_residual()
    if residual > 1e-10:
        raise IntegrityError(f"kraus completeness residual {residual:.3e}")
    return pair


def autocorrelation(noise: NoiseModel, t: float, s: float) -> float:
    """Autocorrelation of the underlying classical noise process between
    times t and s.  Documentation/plotting use only."""
    if t < 0 or s < 0:
        raise ConfigError("times must be >= 0")
    lag = abs(t - s)
    if isinstance(noise, RandomTelegraphNoise):
        # flip time scale tau = 1/(2 gamma), so |t-s|/tau = 2 gamma |t-s|
        return noise.a ** 2 * math.exp(-2.0 * noise.gamma * lag)
    if isinstance(noise, OrnsteinUhlenbeckNoise):
        return (noise.Gamma / noise.gamma) * math.exp(-noise.gamma * lag)
    if isinstance(noise, PowerLawNoise):
        al = float(noise.alpha)
        return 0.5 * (al - 1.0) * al * noise.Gamma / (noise.gamma * lag + 1.0) ** al
    raise ConfigError(f"unknown noise model {noise!r}")


def classify_regime(noise: NoiseModel) -> Regime:
    """Label a noise model Markovian / non-Markovian / minimal.

    The random-telegraph label follows the exact discriminant 2a/gamma.
    For Ornstein-Uhlenbeck and power-law noise there is no sharp
    criterion; a small bandwidth (gamma < 0.1 per step) is labeled
    non-Markovian, and the result is flagged as a heuristic.
    """
    if isinstance(noise, RandomTelegraphNoise):
        ratio = 2.0 * noise.a / noise.gamma
        if abs(ratio - 1.0) <= _MINIMAL_RTOL:
            return Regime(MINIMAL, ratio)
        return Regime(MARKOVIAN if ratio < 1.0 else NON_MARKOVIAN, ratio)
    label = NON_MARKOVIAN if noise.gamma < _BANDWIDTH_THRESHOLD else MARKOVIAN
    return Regime(label, noise.gamma, heuristic=True)
