"""Figure-level reproductions: CSV data per curve plus one SVG per figure.

The CSV files are the testable contract; the SVGs are rendered from the same
arrays for visual inspection.  All outputs are byte-deterministic: floats are
written with shortest round-trip precision and the SVG backend is seeded with
a fixed hash salt and stripped of timestamps.

    fig4   SNR of the measured amplitude vs detection efficiency, OPA splitter
           (g = 5) against the 50/50 beam-splitter scheme, I_ps eps^2 = 1/2.
    fig7   SUI output noise and both joint-measurement SNRs vs recombination
           gain g2 for several g1, with SNL and SQL reference levels.
    fig8   Amplitude SNR vs detection efficiency for SUI at g2 = g1 = 1.5 and
           g2 = 5 >> g1 = 1.5 against dense coding with g = 1.5.
    fig10  Minimum measurable modulation depth vs probe photon number for the
           unseeded SUI at several internal losses, with SQL and HL references.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .encoding import ModulationSignal
from .schemes import (
    SchemeParams,
    heisenberg_limit,
    paired_gain,
    snr_scheme,
    sui_output_noise,
)

FIGURES = ("fig4", "fig7", "fig8", "fig10")

CSV_HEADER = "param,observable,signal_power,noise_power,snr,snr_db"

_FIG7_G1_SERIES = (0.5, 1.0, 1.5, 2.0, 3.0)
_FIG10_LOSSES = (0.01, 0.1, 0.3)


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_csv(path: Path, comments: dict, header: str, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key, value in comments.items():
            fh.write(f"# {key} = {value}\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(str(c) if isinstance(c, str) else _fmt(c) for c in row) + "\n")


def _save_svg(fig, path: Path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _snr_rows(scheme: str, label: str, param_values, params_for, signal_for):
    """Rows of (param, label, signal, noise, snr, snr_db) from analytic reports."""
    rows = []
    for value in param_values:
        report = snr_scheme(scheme, params_for(value), signal_for(value), mode="analytic")
        res = report.observables[label]
        rows.append((value, label, res.signal_power, res.noise_power, res.snr, res.snr_db))
    return rows


def _alpha_sq_for(i_ps_depth_sq: float, depth: float, gain_sq: float) -> float:
    """Seed intensity giving the target I_ps depth^2 normalization."""
    return i_ps_depth_sq / (depth * depth * gain_sq)


def write_fig4(out_dir: Path) -> list[Path]:
    eps = 0.01
    etas = np.round(np.linspace(0.1, 1.0, 91), 10)
    signal = ModulationSignal(eps, 0.0)
    alpha_sq = _alpha_sq_for(0.5, eps, 1.0)

    opa_rows = _snr_rows(
        "opa_split", "Xs", etas,
        lambda eta: SchemeParams(alpha_sq=alpha_sq, g=5.0, loss_detect=1.0 - float(eta)),
        lambda eta: signal,
    )
    bs_rows = _snr_rows(
        "beam_split", "Xb1", etas,
        lambda eta: SchemeParams(alpha_sq=alpha_sq, t=0.5, loss_detect=1.0 - float(eta)),
        lambda eta: signal,
    )
    comments = {"param": "detection_efficiency", "i_ps_eps_sq": 0.5}
    paths = []
    for name, rows, extra in (("opa", opa_rows, {"scheme": "opa_split", "g": 5.0}),
                              ("bs", bs_rows, {"scheme": "beam_split", "t": 0.5})):
        path = out_dir / f"fig4_{name}.csv"
        _write_csv(path, {**extra, **comments}, CSV_HEADER, rows)
        paths.append(path)

    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.plot(etas, [r[5] for r in opa_rows], "-", label="OPA splitter (g = 5)")
    ax.plot(etas, [r[5] for r in bs_rows], "--", label="50/50 beam splitter")
    ax.axhline(0.0, color="0.6", lw=0.8, label="SQL")
    ax.set_xlabel(r"detection efficiency $1 - L_d$")
    ax.set_ylabel("SNR of amplitude signal (dB)")
    ax.legend(frameon=False)
    fig.tight_layout()
    svg = out_dir / "fig4.svg"
    _save_svg(fig, svg)
    return paths + [svg]


def write_fig7(out_dir: Path) -> list[Path]:
    eps = 0.01
    grid = np.union1d(np.geomspace(0.1, 50.0, 121), np.asarray(_FIG7_G1_SERIES))
    paths = []
    curves = {}
    for g1 in _FIG7_G1_SERIES:
        alpha_sq = _alpha_sq_for(0.5, eps, paired_gain(g1) ** 2)
        for label, sig in (("Xs", ModulationSignal(eps, 0.0)), ("Yi", ModulationSignal(0.0, eps))):
            rows = _snr_rows(
                "sui", label, grid,
                lambda g2, g1=g1, a=alpha_sq: SchemeParams(alpha_sq=a, g1=g1, g2=float(g2)),
                lambda g2, sig=sig: sig,
            )
            path = out_dir / f"fig7_g1_{g1:g}_{label}.csv"
            _write_csv(
                path,
                {"scheme": "sui", "g1": g1, "param": "g2", "i_ps_depth_sq": 0.5},
                CSV_HEADER,
                rows,
            )
            paths.append(path)
            curves[(g1, label)] = rows

    ref_rows = [(g2, "SQL", 1.0, 1.0, 1.0, 0.0) for g2 in grid]
    ref_rows += [(g2, "SNL", 1.0, 1.0, 1.0, 0.0) for g2 in grid]
    ref_path = out_dir / "fig7_refs.csv"
    _write_csv(ref_path, {"param": "g2", "note": "SQL snr reference and SNL noise reference"},
               CSV_HEADER, ref_rows)
    paths.append(ref_path)

    fig, axes = plt.subplots(1, 3, figsize=(12.0, 3.6))
    for g1 in _FIG7_G1_SERIES:
        noise = [sui_output_noise(g1, g2) for g2 in grid]
        axes[0].plot(grid, 10.0 * np.log10(noise), label=f"$g_1 = {g1:g}$")
        axes[1].plot(grid, [r[5] for r in curves[(g1, "Xs")]])
        axes[2].plot(grid, [r[5] for r in curves[(g1, "Yi")]])
    axes[0].axhline(0.0, color="0.6", lw=0.8)
    for ax, title in zip(axes, ("output noise (dB, SNL = 0)",
                                "SNR of $X_m$ at signal output (dB)",
                                "SNR of $Y_m$ at idler output (dB)")):
        ax.set_xscale("log")
        ax.set_xlabel("$g_2$")
        ax.set_title(title, fontsize=10)
    for ax in axes[1:]:
        ax.axhline(0.0, color="0.6", lw=0.8)
    axes[0].legend(frameon=False, fontsize=8)
    fig.tight_layout()
    svg = out_dir / "fig7.svg"
    _save_svg(fig, svg)
    return paths + [svg]


def write_fig8(out_dir: Path) -> list[Path]:
    eps = 0.01
    etas = np.round(np.linspace(0.3, 1.0, 71), 10)
    signal = ModulationSignal(eps, 0.0)
    curves = (
        ("sui_opt", "sui", "Xs", dict(g1=1.5, g2=5.0), paired_gain(1.5) ** 2),
        ("sui_eq", "sui", "Xs", dict(g1=1.5, g2=1.5), paired_gain(1.5) ** 2),
        ("dc", "dense_coding", "Xb1", dict(g=1.5), paired_gain(1.5) ** 2),
    )
    paths = []
    plotted = {}
    for name, scheme, label, kw, gain_sq in curves:
        alpha_sq = _alpha_sq_for(0.5, eps, gain_sq)
        rows = _snr_rows(
            scheme, label, etas,
            lambda eta, kw=kw, a=alpha_sq: SchemeParams(alpha_sq=a, loss_detect=1.0 - float(eta), **kw),
            lambda eta: signal,
        )
        path = out_dir / f"fig8_{name}.csv"
        _write_csv(path, {"scheme": scheme, **kw, "param": "detection_efficiency",
                          "i_ps_eps_sq": 0.5}, CSV_HEADER, rows)
        paths.append(path)
        plotted[name] = rows

    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.plot(etas, [r[5] for r in plotted["sui_opt"]], "-", label=r"SUI, $g_2 = 5 \gg g_1 = 1.5$")
    ax.plot(etas, [r[5] for r in plotted["sui_eq"]], "--", label=r"SUI, $g_1 = g_2 = 1.5$")
    ax.plot(etas, [r[5] for r in plotted["dc"]], ":", label="dense coding, $g = 1.5$")
    ax.axhline(0.0, color="0.6", lw=0.8, label="SQL")
    ax.set_xlabel(r"detection efficiency $1 - L_d$")
    ax.set_ylabel("SNR of amplitude signal (dB)")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    svg = out_dir / "fig8.svg"
    _save_svg(fig, svg)
    return paths + [svg]


def write_fig10(out_dir: Path) -> list[Path]:
    grid = np.union1d(np.geomspace(1.0, 1000.0, 121), np.asarray([4.0, 100.0]))
    header = "i_ps,eps_m"
    paths = []
    curves = {}

    def emit(name: str, values, comments: dict) -> None:
        path = out_dir / f"fig10_{name}.csv"
        _write_csv(path, comments, header, [(i, v) for i, v in zip(grid, values)])
        paths.append(path)
        curves[name] = values

    emit("sql", [1.0 / math.sqrt(2.0 * i) for i in grid],
         {"curve": "standard quantum limit", "formula": "1/sqrt(2 I_ps)"})
    emit("hl", [heisenberg_limit(math.sqrt(i), 0.0)[0] for i in grid],
         {"curve": "Heisenberg limit (lossless SUI)"})
    for loss in _FIG10_LOSSES:
        emit(f"L_{loss:g}", [heisenberg_limit(math.sqrt(i), loss)[0] for i in grid],
             {"curve": "unseeded SUI with internal loss", "L": loss})

    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.loglog(grid, curves["sql"], "-", color="0.4", label="SQL")
    ax.loglog(grid, curves["hl"], "-", color="k", label="HL")
    for loss in _FIG10_LOSSES:
        ax.loglog(grid, curves[f"L_{loss:g}"], "--", label=f"$L = {loss:g}$")
    ax.set_xlabel(r"probe photon number $I_{ps}$")
    ax.set_ylabel(r"minimum measurable $\epsilon_m$, $\delta_m$")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    svg = out_dir / "fig10.svg"
    _save_svg(fig, svg)
    return paths + [svg]


_WRITERS = {"fig4": write_fig4, "fig7": write_fig7, "fig8": write_fig8, "fig10": write_fig10}


def write_figure(name: str, out_dir) -> list[Path]:
    """Emit one figure's CSV curves and SVG into out_dir; returns written paths."""
    if name not in _WRITERS:
        raise ValueError(f"unknown figure {name!r}; expected one of {FIGURES}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    plt.rcParams["svg.hashsalt"] = "suilab"
    return _WRITERS[name](out)
