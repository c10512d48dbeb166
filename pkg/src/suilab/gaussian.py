"""Exact Gaussian-state engine for optical mode networks.

Quadrature convention (fixed, not configurable):
    X = a' + a,  Y = i(a' - a)   with [a, a'] = 1,
so every vacuum quadrature has unit variance and a coherent state |alpha>
has mean vector (2 Re alpha, 2 Im alpha) per mode.  States are stored as a
real mean vector ordered (X1, Y1, X2, Y2, ...) plus a real symmetric
covariance matrix.  All operations are pure: they return new states and
never mutate their inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

VACUUM_VARIANCE = 1.0

_SYMMETRY_ATOL = 1e-12
_UNCERTAINTY_ATOL = 1e-9


class GaussianStateError(ValueError):
    """Raised for invalid state data or out-of-range element parameters."""


def paired_gain(g: float) -> float:
    """Return G = sqrt(1 + g^2), the co-gain of a two-mode squeezer.

    G is always derived from g so that G^2 - g^2 = 1 holds to machine
    precision; G is never stored independently.
    """
    return math.hypot(1.0, g)


def symplectic_form(n_modes: int) -> np.ndarray:
    """Standard symplectic form in (X1, Y1, X2, Y2, ...) ordering."""
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for m in range(n_modes):
        omega[2 * m, 2 * m + 1] = 1.0
        omega[2 * m + 1, 2 * m] = -1.0
    return omega


@dataclass(frozen=True, eq=False)
class GaussianState:
    mean: np.ndarray
    cov: np.ndarray

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GaussianState):
            return NotImplemented
        return np.array_equal(self.mean, other.mean) and np.array_equal(self.cov, other.cov)

    def __post_init__(self) -> None:
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        cov = np.asarray(self.cov, dtype=float)
        if mean.ndim != 1 or mean.size % 2 != 0 or mean.size == 0:
            raise GaussianStateError(f"mean must have even positive length, got shape {mean.shape}")
        if cov.shape != (mean.size, mean.size):
            raise GaussianStateError(f"cov shape {cov.shape} does not match mean length {mean.size}")
        # guards scale with the matrix magnitude: high-gain covariances carry
        # float asymmetry of order |cov| * eps from the symplectic products
        scale = max(1.0, float(np.max(np.abs(cov))))
        if not np.allclose(cov, cov.T, atol=_SYMMETRY_ATOL * scale, rtol=0.0):
            raise GaussianStateError("covariance matrix is not symmetric")
        if symplectic_eigenvalues(cov).min() < 1.0 - _UNCERTAINTY_ATOL * scale:
            raise GaussianStateError("covariance matrix violates the uncertainty bound")
        mean = mean.copy()
        cov = 0.5 * (cov + cov.T)
        mean.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def n_modes(self) -> int:
        return self.mean.size // 2

    def mode_mean(self, mode: int) -> tuple[float, float]:
        self._check_mode(mode)
        return float(self.mean[2 * mode]), float(self.mean[2 * mode + 1])

    def _check_mode(self, mode: int) -> None:
        if not 0 <= mode < self.n_modes:
            raise GaussianStateError(f"mode {mode} out of range for {self.n_modes}-mode state")


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues of a covariance matrix (vacuum = 1)."""
    n = cov.shape[0] // 2
    eig = np.linalg.eigvals(1j * symplectic_form(n) @ cov)
    return np.sort(np.abs(eig.real))[n:]


# --- network elements -------------------------------------------------------


@dataclass(frozen=True)
class BeamSplitter:
    """Lossless beam splitter: out_a = sqrt(T) a + sqrt(R) b, out_b = sqrt(R) a - sqrt(T) b."""

    transmissivity: float
    modes: tuple[int, int]

    def __post_init__(self) -> None:
        if not 0.0 <= self.transmissivity <= 1.0:
            raise GaussianStateError(f"transmissivity {self.transmissivity} outside [0, 1]")
        if self.modes[0] == self.modes[1]:
            raise GaussianStateError("beam splitter needs two distinct modes")

    def symplectic(self, n_modes: int) -> np.ndarray:
        t = math.sqrt(self.transmissivity)
        r = math.sqrt(1.0 - self.transmissivity)
        s = np.eye(2 * n_modes)
        a, b = self.modes
        for q in (0, 1):  # same rotation on X and Y blocks
            s[2 * a + q, 2 * a + q] = t
            s[2 * a + q, 2 * b + q] = r
            s[2 * b + q, 2 * a + q] = r
            s[2 * b + q, 2 * b + q] = -t
        return s


@dataclass(frozen=True)
class TwoModeSqueezer:
    """Non-degenerate parametric amplifier: a_s -> G a_s + g a_i', a_i -> G a_i + g a_s'.

    Quadrature action: X_s' = G X_s + g X_i, Y_s' = G Y_s - g Y_i and
    symmetrically for the idler.  G = sqrt(1 + g^2) is derived, never stored.
    """

    gain: float
    modes: tuple[int, int]

    def __post_init__(self) -> None:
        if self.gain < 0.0:
            raise GaussianStateError(f"squeezer gain {self.gain} must be >= 0")
        if self.modes[0] == self.modes[1]:
            raise GaussianStateError("two-mode squeezer needs two distinct modes")

    @property
    def co_gain(self) -> float:
        return paired_gain(self.gain)

    def symplectic(self, n_modes: int) -> np.ndarray:
        g = self.gain
        big_g = self.co_gain
        s = np.eye(2 * n_modes)
        a, b = self.modes
        for q, sign in ((0, 1.0), (1, -1.0)):  # X couples with +g, Y with -g
            s[2 * a + q, 2 * a + q] = big_g
            s[2 * a + q, 2 * b + q] = sign * g
            s[2 * b + q, 2 * a + q] = sign * g
            s[2 * b + q, 2 * b + q] = big_g
        return s


@dataclass(frozen=True)
class PhaseShift:
    """Phase shift a -> a e^{i phi}: rotation of the (X, Y) plane of one mode."""

    angle: float
    mode: int

    def symplectic(self, n_modes: int) -> np.ndarray:
        c, s_ = math.cos(self.angle), math.sin(self.angle)
        s = np.eye(2 * n_modes)
        m = self.mode
        s[2 * m, 2 * m] = c
        s[2 * m, 2 * m + 1] = -s_
        s[2 * m + 1, 2 * m] = s_
        s[2 * m + 1, 2 * m + 1] = c
        return s


@dataclass(frozen=True)
class LossChannel:
    """Vacuum-coupled loss: mean -> sqrt(1-L) mean, diagonal block -> (1-L) cov + L I."""

    loss: float
    mode: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.loss <= 1.0:
            raise GaussianStateError(f"loss {self.loss} outside [0, 1]")


@dataclass(frozen=True)
class Modulator:
    """Joint weak amplitude/phase modulator acting on the mean field only.

    The mean complex amplitude maps as alpha -> alpha (1 + i delta - eps),
    the linearized form of e^{i delta} e^{-eps}; the covariance is untouched.
    Modulator(0, 0) is the identity.
    """

    eps: float = 0.0
    delta: float = 0.0
    mode: int = 0

    def mean_matrix(self) -> np.ndarray:
        return np.array([[1.0 - self.eps, -self.delta], [self.delta, 1.0 - self.eps]])


SymplecticElement = (BeamSplitter, TwoModeSqueezer, PhaseShift)
CircuitElement = BeamSplitter | TwoModeSqueezer | PhaseShift | LossChannel | Modulator


@dataclass(frozen=True)
class MeasurementStats:
    """Mean and variance of one linear quadrature combination."""

    mean: float
    variance: float

    def __post_init__(self) -> None:
        if self.variance < 0.0:
            raise GaussianStateError(f"variance {self.variance} must be >= 0")


# --- state constructors ------------------------------------------------------


def vacuum(n_modes: int) -> GaussianState:
    """n-mode vacuum: zero mean, identity covariance."""
    if n_modes < 1:
        raise GaussianStateError("n_modes must be >= 1")
    return GaussianState(np.zeros(2 * n_modes), np.eye(2 * n_modes))


def coherent(alphas: list[complex]) -> GaussianState:
    """Product of coherent states; mode k has mean (2 Re alpha_k, 2 Im alpha_k)."""
    if len(alphas) == 0:
        raise GaussianStateError("coherent() needs at least one amplitude")
    mean = np.zeros(2 * len(alphas))
    for k, a in enumerate(alphas):
        a = complex(a)
        mean[2 * k] = 2.0 * a.real
        mean[2 * k + 1] = 2.0 * a.imag
    return GaussianState(mean, np.eye(2 * len(alphas)))


# --- propagation -------------------------------------------------------------


def apply_element(state: GaussianState, element: CircuitElement) -> GaussianState:
    """Propagate a state through one network element (pure, returns a new state)."""
    n = state.n_modes
    for m in _element_modes(element):
        state._check_mode(m)
    if isinstance(element, SymplecticElement):
        s = element.symplectic(n)
        return GaussianState(s @ state.mean, s @ state.cov @ s.T)
    if isinstance(element, LossChannel):
        return _apply_loss(state, element)
    if isinstance(element, Modulator):
        mean = state.mean.copy()
        m = element.mode
        mean[2 * m : 2 * m + 2] = element.mean_matrix() @ mean[2 * m : 2 * m + 2]
        return GaussianState(mean, state.cov)
    raise TypeError(f"unknown element type {type(element).__name__}")


def apply_circuit(state: GaussianState, elements) -> GaussianState:
    for element in elements:
        state = apply_element(state, element)
    return state


def _element_modes(element: CircuitElement) -> tuple[int, ...]:
    if isinstance(element, (BeamSplitter, TwoModeSqueezer)):
        return element.modes
    return (element.mode,)


def _apply_loss(state: GaussianState, channel: LossChannel) -> GaussianState:
    eta = 1.0 - channel.loss
    root = math.sqrt(eta)
    m = channel.mode
    sl = slice(2 * m, 2 * m + 2)
    mean = state.mean.copy()
    cov = state.cov.copy()
    mean[sl] *= root
    cov[sl, :] *= root
    cov[:, sl] *= root
    # diagonal block gets (1-L) cov + L I; the double sqrt above already gave (1-L) cov
    cov[2 * m, 2 * m] += channel.loss
    cov[2 * m + 1, 2 * m + 1] += channel.loss
    return GaussianState(mean, cov)


# --- readout statistics ------------------------------------------------------


def _direction(n_modes: int, terms) -> np.ndarray:
    v = np.zeros(2 * n_modes)
    for mode, angle, weight in terms:
        v[2 * mode] += weight * math.cos(angle)
        v[2 * mode + 1] += weight * math.sin(angle)
    return v


def homodyne_stats(state: GaussianState, mode: int, angle: float) -> MeasurementStats:
    """Statistics of X(angle) = cos(angle) X + sin(angle) Y on one mode.

    Statistics only; the state is not conditioned on the outcome.
    """
    return combined_stats(state, [(mode, angle, 1.0)])


def combined_stats(state: GaussianState, terms) -> MeasurementStats:
    """Statistics of sum_k w_k X_{m_k}(phi_k), cross-correlations included.

    `terms` is an iterable of (mode, angle, weight).
    """
    terms = list(terms)
    if not terms:
        raise GaussianStateError("combined_stats needs at least one term")
    for mode, _, _ in terms:
        state._check_mode(mode)
    v = _direction(state.n_modes, terms)
    mean = float(v @ state.mean)
    variance = float(v @ state.cov @ v)
    return MeasurementStats(mean, max(variance, 0.0))


def sample_outcomes(state: GaussianState, terms, n_samples: int, seed: int) -> np.ndarray:
    """Draw i.i.d. outcomes of the combined quadrature; deterministic given seed."""
    if n_samples < 1:
        raise GaussianStateError("n_samples must be >= 1")
    stats = combined_stats(state, terms)
    rng = np.random.default_rng(seed)
    return rng.normal(stats.mean, math.sqrt(stats.variance), size=n_samples)


def photon_number(state: GaussianState, mode: int) -> float:
    """Mean photon number of one mode: coherent part plus thermal part."""
    state._check_mode(mode)
    mx, my = state.mode_mean(mode)
    var_x = state.cov[2 * mode, 2 * mode]
    var_y = state.cov[2 * mode + 1, 2 * mode + 1]
    return (mx * mx + my * my) / 4.0 + (var_x + var_y - 2.0) / 4.0
