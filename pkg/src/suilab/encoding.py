"""Modulation signals and conversion of measurement statistics into SNR figures.

A modulation signal lives in the (amplitude, phase)-depth plane: eps is the
amplitude-modulation depth, delta the phase-modulation depth, and the polar
form (gamma, theta) encodes a quadrature signal of depth gamma at angle theta
via eps = gamma cos(theta), delta = gamma sin(theta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .gaussian import MeasurementStats


class DegenerateNoiseError(ArithmeticError):
    """Raised when a readout reports non-positive noise power."""


@dataclass(frozen=True)
class ModulationSignal:
    """Weak modulation depths carried by the probe beam."""

    eps: float = 0.0
    delta: float = 0.0

    @classmethod
    def polar(cls, gamma: float, theta: float) -> "ModulationSignal":
        if gamma < 0.0:
            raise ValueError("signal depth gamma must be >= 0")
        return cls(gamma * math.cos(theta), gamma * math.sin(theta))

    @property
    def gamma(self) -> float:
        return math.hypot(self.eps, self.delta)

    @property
    def theta(self) -> float:
        return math.atan2(self.delta, self.eps)

    def is_zero(self) -> bool:
        return self.eps == 0.0 and self.delta == 0.0


ZERO_SIGNAL = ModulationSignal(0.0, 0.0)


def decode_angle(theta: float, conjugate: bool = False) -> float:
    """LO angle at which a polar signal at angle theta gives its full mean shift.

    With the modulator map alpha -> alpha (1 + i delta - eps), the mean shift
    of a depth-gamma signal encoded at angle theta points along -theta on a
    directly transmitted port and along +theta on a port fed through a
    conjugating (parametric idler) path.  The decoded signal power is the
    same either way; only the LO setting differs.
    """
    return theta if conjugate else -theta


@dataclass(frozen=True)
class SnrResult:
    """Signal power, noise power and their ratio for one readout."""

    signal_power: float
    noise_power: float

    def __post_init__(self) -> None:
        if self.signal_power < 0.0:
            raise ValueError("signal power must be >= 0")
        if self.noise_power <= 0.0:
            raise DegenerateNoiseError(f"noise power {self.noise_power} must be > 0")

    @property
    def snr(self) -> float:
        return self.signal_power / self.noise_power

    @property
    def snr_db(self) -> float:
        return 10.0 * math.log10(self.snr) if self.snr > 0.0 else -math.inf


def extract_snr(
    circuit_eval: Callable[[ModulationSignal], MeasurementStats],
    signal: ModulationSignal,
) -> SnrResult:
    """SNR of a readout: squared mean shift against the zero-signal run.

    The signal power is (mean(signal) - mean(zero))^2 and the noise power is
    the zero-signal variance.  Modulators act linearly on the mean, so this
    is exact rather than a finite-difference approximation.  A zero-depth
    signal yields SNR 0 rather than an error.
    """
    reference = circuit_eval(ZERO_SIGNAL)
    if reference.variance <= 0.0:
        raise DegenerateNoiseError(f"zero-signal noise power {reference.variance} is not positive")
    modulated = circuit_eval(signal)
    shift = modulated.mean - reference.mean
    return SnrResult(shift * shift, reference.variance)


def combined_estimator(theta: float, k: float, signal_mode: int = 0, idler_mode: int = 1):
    """Readout plan for the post-detection combination cos(theta) X_s + k sin(theta) Y_i.

    Returns (mode, angle, weight) terms for `combined_stats`; k balances the
    gain difference between the signal and idler ports.
    """
    if not math.isfinite(k):
        raise ValueError("k must be finite")
    return [
        (signal_mode, 0.0, math.cos(theta)),
        (idler_mode, math.pi / 2.0, k * math.sin(theta)),
    ]


def sql_joint(i_ps: float, depth: float) -> float:
    """Standard quantum limit of the joint measurement: 2 I_ps depth^2."""
    return 2.0 * i_ps * depth * depth


def enhancement_db(result: SnrResult, sql: float) -> float:
    """SNR in dB relative to the joint-measurement SQL; nan when the SQL is zero."""
    if sql <= 0.0:
        return math.nan
    return result.snr_db - 10.0 * math.log10(sql)
