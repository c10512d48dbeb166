"""Tests of signal encoding, SNR extraction and the SQL reference."""

import math

import pytest

from suilab.encoding import (
    DegenerateNoiseError,
    ModulationSignal,
    SnrResult,
    ZERO_SIGNAL,
    combined_estimator,
    decode_angle,
    extract_snr,
    sql_joint,
)
from suilab.gaussian import (
    BeamSplitter,
    Modulator,
    PhaseShift,
    TwoModeSqueezer,
    apply_circuit,
    coherent,
    combined_stats,
    homodyne_stats,
    paired_gain,
)


def direct_eval(alpha: float, angle: float):
    """Direct-measurement closure: coherent probe through a modulator."""

    def run(signal: ModulationSignal):
        state = apply_circuit(coherent([alpha]), [Modulator(signal.eps, signal.delta, 0)])
        return homodyne_stats(state, 0, angle)

    return run


class TestModulationSignal:
    def test_polar_cartesian_round_trip(self):
        for gamma, theta in ((0.01, 0.3), (2e-3, -1.2), (0.5, math.pi / 2)):
            sig = ModulationSignal.polar(gamma, theta)
            assert sig.gamma == pytest.approx(gamma, abs=1e-12)
            assert math.cos(sig.theta) == pytest.approx(math.cos(theta), abs=1e-12)
            assert math.sin(sig.theta) == pytest.approx(math.sin(theta), abs=1e-12)

    def test_axis_identifications(self):
        assert ModulationSignal.polar(0.3, 0.0) == ModulationSignal(0.3, 0.3 * math.sin(0.0))
        sig = ModulationSignal.polar(0.3, math.pi / 2)
        assert sig.delta == pytest.approx(0.3, abs=1e-15)
        assert sig.eps == pytest.approx(0.0, abs=1e-15)

    def test_negative_depth_rejected(self):
        with pytest.raises(ValueError):
            ModulationSignal.polar(-0.1, 0.0)


class TestSnrResult:
    def test_ratio_and_db(self):
        res = SnrResult(4.0, 2.0)
        assert res.snr == pytest.approx(2.0, rel=1e-15)
        assert res.snr_db == pytest.approx(10.0 * math.log10(2.0), rel=1e-12)

    def test_zero_signal_gives_minus_inf_db(self):
        assert SnrResult(0.0, 1.0).snr_db == -math.inf

    def test_degenerate_noise_rejected(self):
        with pytest.raises(DegenerateNoiseError):
            SnrResult(1.0, 0.0)

    def test_db_consistency(self):
        a, b = SnrResult(5.0, 1.3), SnrResult(0.7, 2.1)
        assert 10.0 * math.log10(a.snr / b.snr) == pytest.approx(a.snr_db - b.snr_db, abs=1e-10)


class TestExtractSnr:
    def test_direct_phase_measurement(self):
        # |alpha|^2 = 100, delta = 0.1, read Y: SNR = 4 I delta^2 = 4
        run = direct_eval(10.0, math.pi / 2)
        res = extract_snr(run, ModulationSignal(0.0, 0.1))
        assert res.snr == pytest.approx(4.0, rel=1e-12)

    def test_zero_signal_snr_is_zero(self):
        res = extract_snr(direct_eval(10.0, 0.0), ZERO_SIGNAL)
        assert res.signal_power == 0.0
        assert res.snr == 0.0

    def test_balanced_splitter_halves_snr(self):
        def run(signal: ModulationSignal):
            state = apply_circuit(
                coherent([10.0, 0.0]),
                [Modulator(signal.eps, signal.delta, 0), BeamSplitter(0.5, (0, 1))],
            )
            return homodyne_stats(state, 0, math.pi / 2)

        res = extract_snr(run, ModulationSignal(0.0, 0.1))
        assert res.snr == pytest.approx(2.0, rel=1e-12)

    def test_signal_power_scales_quadratically(self):
        run = direct_eval(7.0, 0.0)
        small = extract_snr(run, ModulationSignal(2e-3, 0.0))
        big = extract_snr(run, ModulationSignal(4e-3, 0.0))
        assert big.signal_power == pytest.approx(4.0 * small.signal_power, rel=1e-12)

    def test_angle_decomposition(self):
        # encoding gamma at angle theta and reading the decode quadrature gives
        # the same SNR as a pure amplitude signal of the same depth read at 0
        gamma = 5e-3
        reference = extract_snr(direct_eval(9.0, 0.0), ModulationSignal(gamma, 0.0))
        for theta in (0.0, 0.37, 1.2, math.pi / 2, 2.6):
            res = extract_snr(
                direct_eval(9.0, decode_angle(theta)), ModulationSignal.polar(gamma, theta)
            )
            assert abs(res.snr - reference.snr) < 1e-10 * reference.snr


class TestCombinedEstimator:
    def test_reduces_to_signal_port_at_zero(self):
        plan = combined_estimator(0.0, k=2.0)
        assert plan[0] == (0, 0.0, pytest.approx(1.0))
        assert plan[1][2] == pytest.approx(0.0, abs=1e-16)

    def test_reduces_to_weighted_idler_at_right_angle(self):
        plan = combined_estimator(math.pi / 2, k=2.0)
        assert plan[0][2] == pytest.approx(0.0, abs=1e-12)
        assert plan[1] == (1, math.pi / 2, pytest.approx(2.0))

    def test_rejects_non_finite_k(self):
        with pytest.raises(ValueError):
            combined_estimator(0.3, k=math.inf)

    def test_high_gain_balanced_combination_reaches_quantum_limit(self):
        # k = G2/g2 and large g2: SNR -> 2 (G1+g1)^2 I_ps gamma^2
        g1, g2 = 1.0, 1e3
        big_g1, big_g2 = paired_gain(g1), paired_gain(g2)
        alpha = 10.0
        theta, gamma = math.pi / 4, 1e-3
        plan = combined_estimator(theta, k=big_g2 / g2)

        def run(signal: ModulationSignal):
            state = apply_circuit(
                coherent([alpha, 0.0]),
                [
                    TwoModeSqueezer(g1, (0, 1)),
                    Modulator(signal.eps, signal.delta, 0),
                    PhaseShift(math.pi, 1),
                    TwoModeSqueezer(g2, (0, 1)),
                ],
            )
            return combined_stats(state, plan)

        res = extract_snr(run, ModulationSignal.polar(gamma, theta))
        i_ps = big_g1**2 * alpha**2
        expected = 2.0 * (big_g1 + g1) ** 2 * i_ps * gamma**2
        assert abs(res.snr - expected) / expected < 1e-4


class TestSqlJoint:
    def test_values(self):
        assert sql_joint(1.0, math.sqrt(0.5)) == pytest.approx(1.0, rel=1e-15)
        assert sql_joint(123.0, 0.0) == 0.0
        assert sql_joint(100.0, 0.1) == pytest.approx(2.0, rel=1e-15)
