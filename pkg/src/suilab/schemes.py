"""Joint-measurement schemes: closed-form SNRs and their circuit realizations.

Every scheme exists in two evaluation modes that must agree to high
precision: `analytic` evaluates the closed-form signal/noise expressions,
`numeric` builds the optical circuit and propagates Gaussian states through
it.  Photon-number bookkeeping (I_ps) follows each scheme's own definition
of the probe intensity at the sensing point:

    direct, beam_split, opa_split   I_ps = |alpha|^2
    dense_coding                    I_ps = G^2 |alpha|^2
    sui, sui_split3, post_detection I_ps = G1^2 |alpha|^2
    dual_beam                       I_ps = (G1^2 + g1^2) |alpha|^2
    db_dc                           I_ps = (G^2 + g^2) |alpha|^2

The standard quantum limit reference is always the joint-measurement SQL
2 I_ps depth^2 at the scheme's own I_ps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from . import encoding
from .circuit import Circuit, Combine, Homodyne
from .encoding import ModulationSignal, SnrResult, ZERO_SIGNAL, decode_angle, sql_joint
from .gaussian import (
    BeamSplitter,
    GaussianState,
    LossChannel,
    Modulator,
    PhaseShift,
    TwoModeSqueezer,
    apply_element,
    coherent,
    combined_stats,
    paired_gain,
)

SCHEMES = (
    "direct",
    "beam_split",
    "opa_split",
    "dense_coding",
    "sui",
    "sui_split3",
    "post_detection",
    "dual_beam",
    "db_dc",
)

# schemes with a sensing region between two OPAs; only these accept internal loss
_SUI_FAMILY = ("sui", "sui_split3", "post_detection", "dual_beam")

_DEFAULT_THETAS = (0.0, math.pi / 2.0, 0.0)


@dataclass(frozen=True)
class SchemeParams:
    """Parameter point for the measurement schemes; gains are amplitude gains g."""

    alpha_sq: float = 100.0
    g: float = 1.5
    g1: float = 1.0
    g2: float = 5.0
    t: float = 0.5
    phase: float = math.pi
    loss_detect: float = 0.0
    loss_internal: float = 0.0
    k: float | None = None

    def __post_init__(self) -> None:
        if self.alpha_sq < 0.0:
            raise ValueError("alpha_sq must be >= 0")
        for name in ("g", "g1", "g2"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0")
        if not 0.0 <= self.t <= 1.0:
            raise ValueError("t must be in [0, 1]")
        for name in ("loss_detect", "loss_internal"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")
        if self.k is not None and not math.isfinite(self.k):
            raise ValueError("k must be finite")

    @property
    def big_g(self) -> float:
        return paired_gain(self.g)

    @property
    def big_g1(self) -> float:
        return paired_gain(self.g1)

    @property
    def big_g2(self) -> float:
        return paired_gain(self.g2)

    @property
    def k_effective(self) -> float:
        """Post-detection weight; defaults to the gain-balancing choice G2/g2."""
        if self.k is not None:
            return self.k
        if self.g2 == 0.0:
            raise ValueError("k defaults to G2/g2, undefined at g2 = 0; set k explicitly")
        return self.big_g2 / self.g2


@dataclass(frozen=True)
class SchemeReport:
    """Per-observable signal/noise/SNR figures for one scheme at one point."""

    scheme: str
    i_ps: float
    alpha_sq: float
    observables: dict[str, SnrResult]
    sql: dict[str, float]
    extras: dict[str, float] = field(default_factory=dict)

    def labels(self) -> list[str]:
        return list(self.observables)

    def snr(self, label: str) -> float:
        return self.observables[label].snr

    def snr_db(self, label: str) -> float:
        return self.observables[label].snr_db

    def enhancement_db(self, label: str) -> float:
        """SNR in dB above the joint-measurement SQL at this scheme's I_ps."""
        return encoding.enhancement_db(self.observables[label], self.sql[label])


def sui_output_noise(g1: float, g2: float) -> float:
    """Quadrature noise power at either SUI output at the dark fringe.

    Equals (G2 G1 - g1 g2)^2 + (G1 g2 - G2 g1)^2, independent of the LO
    angle; reaches the shot-noise value 1 exactly at g2 = g1.
    """
    big_g1, big_g2 = paired_gain(g1), paired_gain(g2)
    return (big_g2 * big_g1 - g1 * g2) ** 2 + (big_g1 * g2 - big_g2 * g1) ** 2


def _sui_internal_noise(g1: float, g2: float, loss_internal: float) -> float:
    """SUI output noise with equal arm loss between the OPAs."""
    big_g2 = paired_gain(g2)
    lossless = sui_output_noise(g1, g2)
    return (1.0 - loss_internal) * lossless + loss_internal * (big_g2 * big_g2 + g2 * g2)


def _detected(noise: float, loss_detect: float, n_ports: float = 1.0) -> float:
    """Noise seen by homodyne detection with loss L_d on each contributing port."""
    return (1.0 - loss_detect) * noise + n_ports * loss_detect


# --- circuit construction ----------------------------------------------------


def build_circuit(
    scheme: str,
    params: SchemeParams,
    signal: ModulationSignal = ZERO_SIGNAL,
    thetas: tuple[float, float, float] | None = None,
) -> Circuit:
    """Optical circuit realizing a scheme; numeric evaluation of the result
    reproduces the scheme's analytic report."""
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    if params.loss_internal > 0.0 and scheme not in _SUI_FAMILY:
        raise ValueError(f"scheme {scheme!r} has no internal sensing stage for loss_internal")
    ld = params.loss_detect
    li = params.loss_internal
    mod = Modulator(signal.eps, signal.delta, 0)

    def det_losses(modes):
        return [LossChannel(ld, m) for m in modes] if ld > 0.0 else []

    if scheme == "direct":
        elements = [mod, *det_losses([0])]
        readouts = [Homodyne("X", 0, 0.0), Homodyne("Y", 0, math.pi / 2.0)]
        return Circuit(("a",), tuple(elements), tuple(readouts))

    if scheme == "beam_split":
        elements = [mod, BeamSplitter(params.t, (0, 1)), *det_losses([0, 1])]
        readouts = [Homodyne("Xb1", 1, 0.0), Homodyne("Yb2", 0, math.pi / 2.0)]
        return Circuit(("a", "v"), tuple(elements), tuple(readouts))

    if scheme == "opa_split":
        elements = [mod, TwoModeSqueezer(params.g, (0, 1)), *det_losses([0, 1])]
        readouts = [Homodyne("Xs", 0, 0.0), Homodyne("Yi", 1, math.pi / 2.0)]
        return Circuit(("s", "i"), tuple(elements), tuple(readouts))

    if scheme == "dense_coding":
        elements = [
            TwoModeSqueezer(params.g, (0, 1)),
            mod,
            BeamSplitter(0.5, (0, 1)),
            *det_losses([0, 1]),
        ]
        readouts = [Homodyne("Xb1", 1, 0.0), Homodyne("Yb2", 0, math.pi / 2.0)]
        return Circuit(("s", "i"), tuple(elements), tuple(readouts))

    # SUI family: OPA1, modulation stage, arm losses, dark-fringe phase, OPA2
    int_losses = [LossChannel(li, m) for m in (0, 1)] if li > 0.0 else []
    sui_core = [
        TwoModeSqueezer(params.g1, (0, 1)),
        mod,
        *int_losses,
        PhaseShift(params.phase, 1),
        TwoModeSqueezer(params.g2, (0, 1)),
    ]

    if scheme == "sui":
        elements = [*sui_core, *det_losses([0, 1])]
        readouts = [Homodyne("Xs", 0, 0.0), Homodyne("Yi", 1, math.pi / 2.0)]
        return Circuit(("s", "i"), tuple(elements), tuple(readouts))

    if scheme == "sui_split3":
        th = _DEFAULT_THETAS if thetas is None else tuple(thetas)
        if len(th) != 3:
            raise ValueError("sui_split3 needs exactly three readout angles")
        elements = [*sui_core, BeamSplitter(0.5, (0, 2)), *det_losses([0, 1, 2])]
        readouts = [
            Homodyne("HD1", 0, decode_angle(th[0])),
            Homodyne("HD2", 1, decode_angle(th[1], conjugate=True)),
            Homodyne("HD3", 2, decode_angle(th[2])),
        ]
        return Circuit(("s", "i", "t"), tuple(elements), tuple(readouts))

    if scheme == "post_detection":
        theta = signal.theta
        k = params.k_effective
        elements = [*sui_core, *det_losses([0, 1])]
        readouts = [
            Homodyne("i1", 0, 0.0, math.cos(theta)),
            Homodyne("i2", 1, math.pi / 2.0, k * math.sin(theta)),
            Combine("Xtheta", ((1.0, "i1"), (1.0, "i2"))),
        ]
        return Circuit(("s", "i"), tuple(elements), tuple(readouts))

    if scheme == "dual_beam":
        mod_i = Modulator(signal.eps, signal.delta, 1)
        elements = [
            TwoModeSqueezer(params.g1, (0, 1)),
            mod,
            mod_i,
            *int_losses,
            PhaseShift(params.phase, 1),
            TwoModeSqueezer(params.g2, (0, 1)),
            *det_losses([0, 1]),
        ]
        readouts = [
            Homodyne("Ys", 0, math.pi / 2.0),
            Homodyne("Xi", 1, 0.0),
            Homodyne("Yi", 1, math.pi / 2.0),
        ]
        return Circuit(("s", "i"), tuple(elements), tuple(readouts))

    # db_dc: one OPA, both beams co-propagate through the modulators,
    # photocurrents combined by adder (Y) or subtractor (X)
    elements = [
        TwoModeSqueezer(params.g, (0, 1)),
        mod,
        Modulator(signal.eps, signal.delta, 1),
        *det_losses([0, 1]),
    ]
    readouts = [
        Homodyne("Ys", 0, math.pi / 2.0),
        Homodyne("Yi", 1, math.pi / 2.0),
        Homodyne("Xs", 0, 0.0),
        Homodyne("Xi", 1, 0.0),
        Combine("Ysum", ((1.0, "Ys"), (1.0, "Yi"))),
        Combine("Xdiff", ((1.0, "Xs"), (-1.0, "Xi"))),
    ]
    return Circuit(("s", "i"), tuple(elements), tuple(readouts))


# --- numeric evaluation ------------------------------------------------------


def _run_means(circuit: Circuit, base: GaussianState, override: ModulationSignal | None) -> GaussianState:
    state = base
    for element in circuit.elements:
        if override is not None and isinstance(element, Modulator):
            element = Modulator(override.eps, override.delta, element.mode)
        state = apply_element(state, element)
    return state


def _coherent_photons(state: GaussianState, modes) -> float:
    total = 0.0
    for m in modes:
        mx, my = state.mode_mean(m)
        total += (mx * mx + my * my) / 4.0
    return total


def evaluate_circuit(circuit: Circuit, alpha_sq: float, scheme: str = "circuit") -> SchemeReport:
    """Numeric report for a circuit: propagate the seed (first declared mode)
    and every readout's statistics through the Gaussian engine.

    The signal power of a readout is its squared mean shift between the
    as-written run and a run with all modulators zeroed.  The decoded
    modulation depth (used for the SQL reference) is that shift normalized
    by the readout's response to unit amplitude/phase probes, and I_ps is
    the coherent photon number of the modulated modes just before the first
    modulator.
    """
    if alpha_sq < 0.0:
        raise ValueError("alpha_sq must be >= 0")
    n = circuit.n_modes
    base = coherent([math.sqrt(alpha_sq)] + [0.0] * (n - 1))

    mod_modes = sorted({e.mode for e in circuit.elements if isinstance(e, Modulator)})
    state_zero = _run_means(circuit, base, ZERO_SIGNAL)
    state_actual = _run_means(circuit, base, None)
    if mod_modes:
        state_eps = _run_means(circuit, base, ModulationSignal(1.0, 0.0))
        state_delta = _run_means(circuit, base, ModulationSignal(0.0, 1.0))
        first_mod = next(i for i, e in enumerate(circuit.elements) if isinstance(e, Modulator))
        sensing = base
        for element in circuit.elements[:first_mod]:
            sensing = apply_element(sensing, element)
        i_ps = _coherent_photons(sensing, mod_modes)
    else:
        state_eps = state_delta = state_zero
        i_ps = 0.0

    observables: dict[str, SnrResult] = {}
    sql: dict[str, float] = {}
    for readout in circuit.reported_readouts():
        terms = circuit.readout_terms(readout)
        ref = combined_stats(state_zero, terms)
        shift = combined_stats(state_actual, terms).mean - ref.mean
        resp = math.hypot(
            combined_stats(state_eps, terms).mean - ref.mean,
            combined_stats(state_delta, terms).mean - ref.mean,
        )
        depth = abs(shift) / resp if resp > 0.0 else 0.0
        observables[readout.name] = SnrResult(shift * shift, ref.variance)
        sql[readout.name] = sql_joint(i_ps, depth)
    return SchemeReport(scheme, i_ps, alpha_sq, observables, sql)


# --- analytic reports --------------------------------------------------------


def _require_dark_fringe(params: SchemeParams, scheme: str) -> None:
    if not math.isclose(params.phase, math.pi, rel_tol=0.0, abs_tol=1e-12):
        raise ValueError(
            f"analytic {scheme} is only available at the deamplification phase pi; "
            "use numeric mode for other fringe settings"
        )


def _report(scheme, params, i_ps, entries) -> SchemeReport:
    """Assemble a report from (label, signal_power, noise_power, depth) rows."""
    observables = {label: SnrResult(sig, noise) for label, sig, noise, _ in entries}
    sql = {label: sql_joint(i_ps, depth) for label, _, _, depth in entries}
    return SchemeReport(scheme, i_ps, params.alpha_sq, observables, sql)


def _analytic_direct(params: SchemeParams, signal: ModulationSignal) -> SchemeReport:
    # X and Y are alternative single-observable runs: direct homodyne cannot
    # measure both quadratures of one beam at once.
    i_ps = params.alpha_sq
    eta = 1.0 - params.loss_detect
    noise = _detected(1.0, params.loss_detect)
    return _report("direct", params, i_ps, [
        ("X", 4.0 * i_ps * signal.eps ** 2 * eta, noise, signal.eps),
        ("Y", 4.0 * i_ps * signal.delta ** 2 * eta, noise, signal.delta),
    ])


def _analytic_beam_split(params: SchemeParams, signal: ModulationSignal) -> SchemeReport:
    i_ps = params.alpha_sq
    eta = 1.0 - params.loss_detect
    t, r = params.t, 1.0 - params.t
    noise = _detected(1.0, params.loss_detect)
    return _report("beam_split", params, i_ps, [
        ("Xb1", 4.0 * r * i_ps * signal.eps ** 2 * eta, noise, signal.eps),
        ("Yb2", 4.0 * t * i_ps * signal.delta ** 2 * eta, noise, signal.delta),
    ])


def _analytic_opa_split(params: SchemeParams, signal: ModulationSignal) -> SchemeReport:
    i_ps = params.alpha_sq
    eta = 1.0 - params.loss_detect
    big_g, g = params.big_g, params.g
    noise = _detected(big_g * big_g + g * g, params.loss_detect)
    return _report("opa_split", params, i_ps, [
        ("Xs", 4.0 * big_g * big_g * i_ps * signal.eps ** 2 * eta, noise, signal.eps),
        ("Yi", 4.0 * g * g * i_ps * signal.delta ** 2 * eta, noise, signal.delta),
    ])


def _analytic_dense_coding(params: SchemeParams, signal: ModulationSignal) -> SchemeReport:
    big_g, g = params.big_g, params.g
    i_ps = big_g * big_g * params.alpha_sq
    eta = 1.0 - params.loss_detect
    squeezed = 1.0 / (big_g + g) ** 2
    noise = _detected(squeezed, params.loss_detect)
    return _report("dense_coding", params, i_ps, [
        ("Xb1", 2.0 * i_ps * signal.eps ** 2 * eta, noise, signal.eps),
        ("Yb2", 2.0 * i_ps * signal.delta ** 2 * eta, noise, signal.delta),
    ])


def _analytic_sui(params: SchemeParams, signal: ModulationSignal) -> SchemeReport:
    _require_dark_fringe(params, "sui")
    big_g1, big_g2 = params.big_g1, params.big_g2
    i_ps = big_g1 * big_g1 * params.alpha_sq
    eta = (1.0 - params.loss_internal) * (1.0 - params.loss_detect)
    noise = _detected(
        _sui_internal_noise(params.g1, params.g2, params.loss_internal), params.loss_detect
    )
    return _report("sui", params, i_ps, [
        ("Xs", 4.0 * big_g2 * big_g2 * i_ps * signal.eps ** 2 * eta, noise, signal.eps),
        ("Yi", 4.0 * params.g2 ** 2 * i_ps * signal.delta ** 2 * eta, noise, signal.delta),
    ])


def _analytic_sui_split3(params: SchemeParams, signals) -> SchemeReport:
    _require_dark_fringe(params, "sui_split3")
    big_g1, big_g2 = params.big_g1, params.big_g2
    i_ps = big_g1 * big_g1 * params.alpha_sq
    eta = (1.0 - params.loss_internal) * (1.0 - params.loss_detect)
    arm_noise = _sui_internal_noise(params.g1, params.g2, params.loss_internal)
    split_noise = _detected((arm_noise + 1.0) / 2.0, params.loss_detect)
    idler_noise = _detected(arm_noise, params.loss_detect)
    g1_, g2_, g3_ = (s.gamma for s in signals)
    report = _report("sui_split3", params, i_ps, [
        ("HD1", 2.0 * big_g2 * big_g2 * i_ps * g1_ ** 2 * eta, split_noise, g1_),
        ("HD2", 4.0 * params.g2 ** 2 * i_ps * g2_ ** 2 * eta, idler_noise, g2_),
        ("HD3", 2.0 * big_g2 * big_g2 * i_ps * g3_ ** 2 * eta, split_noise, g3_),
    ])
    return replace(report, extras=_split3_extras(params, report))


def _split3_extras(params: SchemeParams, report: SchemeReport) -> dict[str, float]:
    """Split-port penalties in dB: against the unsplit idler port and against
    the same signal port evaluated without the splitter."""
    unsplit = _analytic_sui(params, ModulationSignal(1e-3, 1e-3))
    return {
        "split_penalty_db": report.enhancement_db("HD2") - report.enhancement_db("HD1"),
        "unsplit_penalty_db": unsplit.enhancement_db("Xs") - report.enhancement_db("HD1"),
    }


def _analytic_post_detection(params: SchemeParams, signal: ModulationSignal) -> SchemeReport:
    _require_dark_fringe(params, "post_detection")
    big_g1, big_g2 = params.big_g1, params.big_g2
    i_ps = big_g1 * big_g1 * params.alpha_sq
    eta = (1.0 - params.loss_internal) * (1.0 - params.loss_detect)
    gamma, theta = signal.gamma, signal.theta
    k = params.k_effective
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    gain = big_g2 * c2 + k * params.g2 * s2
    port_noise = _detected(
        _sui_internal_noise(params.g1, params.g2, params.loss_internal), params.loss_detect
    )
    noise = (c2 + k * k * s2) * port_noise
    # decoded depth: projection of (eps, delta) onto the readout response
    resp = math.sqrt(big_g2 * big_g2 * c2 + k * k * params.g2 ** 2 * s2)
    depth = gamma * abs(gain) / resp if resp > 0.0 else 0.0
    return _report("post_detection", params, i_ps, [
        ("Xtheta", 4.0 * gain * gain * i_ps * gamma ** 2 * eta, noise, depth),
    ])


def _analytic_dual_beam(params: SchemeParams, signal: ModulationSignal) -> SchemeReport:
    _require_dark_fringe(params, "dual_beam")
    big_g1, big_g2 = params.big_g1, params.big_g2
    g1, g2 = params.g1, params.g2
    i_ps = (big_g1 * big_g1 + g1 * g1) * params.alpha_sq
    eta = (1.0 - params.loss_internal) * (1.0 - params.loss_detect)
    noise = _detected(_sui_internal_noise(g1, g2, params.loss_internal), params.loss_detect)
    a2 = params.alpha_sq
    return _report("dual_beam", params, i_ps, [
        ("Ys", 4.0 * (big_g1 * big_g2 + g1 * g2) ** 2 * a2 * signal.delta ** 2 * eta, noise, signal.delta),
        ("Xi", 4.0 * (big_g1 * g2 - big_g2 * g1) ** 2 * a2 * signal.eps ** 2 * eta, noise, signal.eps),
        ("Yi", 4.0 * (big_g2 * g1 + big_g1 * g2) ** 2 * a2 * signal.delta ** 2 * eta, noise, signal.delta),
    ])


def _analytic_db_dc(params: SchemeParams, signal: ModulationSignal) -> SchemeReport:
    big_g, g = params.big_g, params.g
    i_ps = (big_g * big_g + g * g) * params.alpha_sq
    eta = 1.0 - params.loss_detect
    noise = eta * 2.0 * (big_g - g) ** 2 + 2.0 * params.loss_detect
    a2 = params.alpha_sq
    return _report("db_dc", params, i_ps, [
        ("Ysum", 4.0 * (big_g + g) ** 2 * a2 * signal.delta ** 2 * eta, noise, signal.delta),
        ("Xdiff", 4.0 * (big_g - g) ** 2 * a2 * signal.eps ** 2 * eta, noise, signal.eps),
    ])


# --- public scheme operations ------------------------------------------------


def _check_scheme_params(scheme: str, params: SchemeParams) -> None:
    if params.loss_internal > 0.0 and scheme not in _SUI_FAMILY:
        raise ValueError(f"scheme {scheme!r} has no internal sensing stage for loss_internal")


def snr_direct(params: SchemeParams, signal: ModulationSignal, mode: str = "analytic") -> SchemeReport:
    return snr_scheme("direct", params, signal, mode)


def snr_beam_split(params: SchemeParams, signal: ModulationSignal, mode: str = "analytic") -> SchemeReport:
    return snr_scheme("beam_split", params, signal, mode)


def snr_opa_split(params: SchemeParams, signal: ModulationSignal, mode: str = "analytic") -> SchemeReport:
    return snr_scheme("opa_split", params, signal, mode)


def snr_dense_coding(params: SchemeParams, signal: ModulationSignal, mode: str = "analytic") -> SchemeReport:
    return snr_scheme("dense_coding", params, signal, mode)


def snr_sui(params: SchemeParams, signal: ModulationSignal, mode: str = "analytic") -> SchemeReport:
    """One-beam SUI joint measurement; seeded operation (for the unseeded
    Heisenberg regime use `heisenberg_limit`)."""
    return snr_scheme("sui", params, signal, mode)


def snr_post_detection(params: SchemeParams, signal: ModulationSignal, mode: str = "analytic") -> SchemeReport:
    return snr_scheme("post_detection", params, signal, mode)


def snr_dual_beam(params: SchemeParams, signal: ModulationSignal, mode: str = "analytic") -> SchemeReport:
    return snr_scheme("dual_beam", params, signal, mode)


def snr_db_dc(params: SchemeParams, signal: ModulationSignal, mode: str = "analytic") -> SchemeReport:
    return snr_scheme("db_dc", params, signal, mode)


_ANALYTIC = {
    "direct": _analytic_direct,
    "beam_split": _analytic_beam_split,
    "opa_split": _analytic_opa_split,
    "dense_coding": _analytic_dense_coding,
    "sui": _analytic_sui,
    "post_detection": _analytic_post_detection,
    "dual_beam": _analytic_dual_beam,
    "db_dc": _analytic_db_dc,
}


def snr_scheme(scheme: str, params: SchemeParams, signal: ModulationSignal, mode: str = "analytic") -> SchemeReport:
    """Evaluate one scheme at one parameter point in the requested mode."""
    if scheme == "sui_split3":
        return snr_sui_split3(params, (signal, signal, signal), mode=mode)
    if scheme not in _ANALYTIC:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    _check_scheme_params(scheme, params)
    if mode == "analytic":
        return _ANALYTIC[scheme](params, signal)
    if mode == "numeric":
        return evaluate_circuit(build_circuit(scheme, params, signal), params.alpha_sq, scheme)
    raise ValueError(f"mode must be 'analytic' or 'numeric', got {mode!r}")


def snr_sui_split3(params: SchemeParams, signals, mode: str = "analytic") -> SchemeReport:
    """Three-observable SUI: the signal output split 50/50 onto HD1/HD3 with
    HD2 on the idler; each signal is decoded at its own port's LO angle."""
    signals = tuple(signals)
    if len(signals) != 3:
        raise ValueError("sui_split3 needs exactly three signals")
    if mode == "analytic":
        return _analytic_sui_split3(params, signals)
    if mode != "numeric":
        raise ValueError(f"mode must be 'analytic' or 'numeric', got {mode!r}")
    thetas = tuple(s.theta for s in signals)
    labels = ("HD1", "HD2", "HD3")
    observables: dict[str, SnrResult] = {}
    sql: dict[str, float] = {}
    i_ps = 0.0
    for k, sig in enumerate(signals):
        circuit = build_circuit("sui_split3", params, sig, thetas)
        run = evaluate_circuit(circuit, params.alpha_sq, "sui_split3")
        observables[labels[k]] = run.observables[labels[k]]
        sql[labels[k]] = run.sql[labels[k]]
        i_ps = run.i_ps
    report = SchemeReport("sui_split3", i_ps, params.alpha_sq, observables, sql)
    unsplit = snr_sui(params, ModulationSignal(1e-3, 1e-3), mode="numeric")
    extras = {
        "split_penalty_db": report.enhancement_db("HD2") - report.enhancement_db("HD1"),
        "unsplit_penalty_db": unsplit.enhancement_db("Xs") - report.enhancement_db("HD1"),
    }
    return replace(report, extras=extras)


# parameter point used for the shipped .qnd scheme descriptions
QND_DEFAULT_PARAMS = SchemeParams()
QND_DEFAULT_SIGNAL = ModulationSignal(0.01, 0.01)


def shipped_circuit_path(scheme: str):
    """Path of the packaged .qnd description of a built-in scheme."""
    from importlib.resources import files

    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    return files("suilab") / "qnd" / f"{scheme}.qnd"


def split3_signals_from(
    signal: ModulationSignal, thetas: tuple[float, float, float] = _DEFAULT_THETAS
) -> tuple[ModulationSignal, ModulationSignal, ModulationSignal]:
    """Per-port signals decoded from one carried modulation: each split3 port
    at readout angle theta sees the projection |eps cos(theta) + delta sin(theta)|."""
    return tuple(
        ModulationSignal.polar(abs(signal.eps * math.cos(th) + signal.delta * math.sin(th)), th)
        for th in thetas
    )


def high_gain_limit(scheme: str, params: SchemeParams, signal: ModulationSignal) -> dict[str, float]:
    """Closed-form infinite-recombination-gain SNR limits, keyed by observable.

    These are the limits the finite-gain evaluations approach as the relevant
    amplifier gain grows (g -> infinity for the single-OPA schemes, g2 for the
    interferometers); infinity itself is not representable in the circuit
    path, so tests compare finite high-gain evaluations against these.
    Lossless only.
    """
    big_g1, g1 = params.big_g1, params.g1
    if scheme == "opa_split":
        i_ps = params.alpha_sq
        return {"Xs": 2.0 * i_ps * signal.eps ** 2, "Yi": 2.0 * i_ps * signal.delta ** 2}
    if scheme == "sui":
        i_ps = big_g1 * big_g1 * params.alpha_sq
        factor = 2.0 * (big_g1 + g1) ** 2 * i_ps
        return {"Xs": factor * signal.eps ** 2, "Yi": factor * signal.delta ** 2}
    if scheme == "post_detection":
        i_ps = big_g1 * big_g1 * params.alpha_sq
        return {"Xtheta": 2.0 * (big_g1 + g1) ** 2 * i_ps * signal.gamma ** 2}
    if scheme == "dual_beam":
        # requires g1 >> 1 as well as g2 >> g1
        i_ps = (big_g1 * big_g1 + g1 * g1) * params.alpha_sq
        return {"Ys": 4.0 * (big_g1 + g1) ** 2 * i_ps * signal.delta ** 2}
    if scheme == "db_dc":
        big_g, g = params.big_g, params.g
        i_ps = (big_g * big_g + g * g) * params.alpha_sq
        return {"Ysum": 4.0 * (big_g + g) ** 2 * i_ps * signal.delta ** 2}
    raise ValueError(f"no high-gain limit defined for scheme {scheme!r}")


# --- derived quantities ------------------------------------------------------


def optimum_g2(params: SchemeParams, observable: str = "amplitude") -> float:
    """Recombination gain that maximizes the SUI SNR at fixed g1.

    For the amplitude (signal-port) observable this is a golden-section
    argmax of the closed-form SNR over g2 in [g1, 1000 g1]; for the phase
    (idler-port) observable the SNR grows monotonically with g2, so the
    supremum sits at infinity and math.inf is returned.
    """
    g1 = params.g1
    if g1 <= 0.0:
        raise ValueError("optimum_g2 is degenerate at g1 = 0: without entanglement the "
                         "SNR does not benefit from the recombination gain")
    obs = observable.lower()
    if obs in ("phase", "y", "yi"):
        return math.inf
    if obs not in ("amplitude", "x", "xs"):
        raise ValueError(f"unknown observable {observable!r}")

    def snr_ratio(g2: float) -> float:
        return paired_gain(g2) ** 2 / sui_output_noise(g1, g2)

    lo, hi = g1, 1e3 * g1
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = snr_ratio(c), snr_ratio(d)
    while hi - lo > 1e-9 * max(1.0, hi):
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = snr_ratio(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = snr_ratio(d)
    return 0.5 * (lo + hi)


def heisenberg_limit(g1: float, internal_loss: float = 0.0, snr_threshold: float = 1.0) -> tuple[float, float]:
    """Minimum detectable (eps, delta) for the unseeded SUI at g2 -> infinity.

    The probe photon number is I_ps = g1^2 (parametric fluorescence only).
    Since the SNR scales as depth^2, the threshold condition inverts in
    closed form:

        eps_m = delta_m
              = sqrt(threshold) * sqrt( 1 / (2 I_ps (G1+g1)^2) + L / (2 (1-L) I_ps) )

    and the lossless case reduces to the Heisenberg scaling 1/(2 sqrt(2) N)
    for g1 >> 1.
    """
    if g1 <= 0.0:
        raise ValueError("g1 must be > 0 (the unseeded probe has I_ps = g1^2)")
    if not 0.0 <= internal_loss < 1.0:
        raise ValueError("internal loss must be in [0, 1)")
    if snr_threshold <= 0.0:
        raise ValueError("snr_threshold must be > 0")
    i_ps = g1 * g1
    big_g1 = paired_gain(g1)
    quantum = 1.0 / (2.0 * i_ps * (big_g1 + g1) ** 2)
    lossy = internal_loss / (2.0 * (1.0 - internal_loss) * i_ps)
    depth = math.sqrt(snr_threshold * (quantum + lossy))
    return depth, depth
