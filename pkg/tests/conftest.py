import math

import numpy as np
import pytest

from suilab.encoding import ModulationSignal
from suilab.schemes import SchemeParams


def rel_diff(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def draw_params(rng: np.random.Generator, with_detect_loss=True, with_internal_loss=False) -> SchemeParams:
    """Random parameter point in the documented test ranges; g away from 0 so
    idler-port observables stay non-degenerate."""
    return SchemeParams(
        alpha_sq=float(rng.uniform(10.0, 1e4)),
        g=float(rng.uniform(0.1, 5.0)),
        g1=float(rng.uniform(0.1, 5.0)),
        g2=float(rng.uniform(0.1, 5.0)),
        t=float(rng.uniform(0.05, 0.95)),
        loss_detect=float(rng.uniform(0.0, 0.5)) if with_detect_loss else 0.0,
        loss_internal=float(rng.uniform(0.0, 0.5)) if with_internal_loss else 0.0,
    )


def draw_signal(rng: np.random.Generator, polar=False) -> ModulationSignal:
    if polar:
        return ModulationSignal.polar(
            float(rng.uniform(1e-4, 1e-2)), float(rng.uniform(0.0, 2.0 * math.pi))
        )
    return ModulationSignal(float(rng.uniform(1e-4, 1e-2)), float(rng.uniform(1e-4, 1e-2)))


def assert_reports_match(analytic, numeric, tol=1e-9):
    assert analytic.labels() == numeric.labels()
    assert rel_diff(analytic.i_ps, numeric.i_ps) < tol
    for label in analytic.labels():
        ra, rn = analytic.observables[label], numeric.observables[label]
        assert rel_diff(ra.signal_power, rn.signal_power) < tol or ra.signal_power == rn.signal_power == 0.0
        assert rel_diff(ra.noise_power, rn.noise_power) < tol
        assert rel_diff(ra.snr, rn.snr) < tol or ra.snr == rn.snr == 0.0
        sa, sn = analytic.sql[label], numeric.sql[label]
        assert rel_diff(sa, sn) < tol or sa == sn == 0.0


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260810)
