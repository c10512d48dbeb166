"""Command-line front end: evaluate schemes and circuits, sweep parameters,
and reproduce the loss/gain figures as CSV + SVG artifacts.

Subcommands:
    eval         report SNRs for a built-in scheme or a .qnd circuit file
    figure       emit one of fig4 / fig7 / fig8 / fig10 (CSV per curve + SVG)
    sweep        grid sweep of one parameter, CSV output in grid order
    parse-check  validate a .qnd file and report positioned diagnostics

Exit codes: 0 success, 2 usage/validation error, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import dsl
from .encoding import ModulationSignal
from .figures import FIGURES, write_figure
from .schemes import (
    SCHEMES,
    SchemeParams,
    SchemeReport,
    build_circuit,
    evaluate_circuit,
    snr_scheme,
    snr_sui_split3,
    split3_signals_from,
)

_SIGNAL_FIELDS = ("eps", "delta", "gamma", "theta")
_PARAM_FIELDS = ("alpha_sq", "g", "g1", "g2", "t", "phase", "loss_detect", "loss_internal", "k")
_SWEEPABLE = _PARAM_FIELDS + _SIGNAL_FIELDS

CSV_HEADER = "param,observable,signal_power,noise_power,snr,snr_db"


class UsageError(ValueError):
    pass


def _fmt(x: float) -> str:
    return repr(float(x))


def _num(x: float):
    return x if math.isfinite(x) else None


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha-sq", type=float, default=None, help="seed photon number |alpha|^2")
    parser.add_argument("--g", type=float, default=None, help="amplitude gain of single-OPA schemes")
    parser.add_argument("--g1", type=float, default=None, help="amplitude gain of OPA1")
    parser.add_argument("--g2", type=float, default=None, help="amplitude gain of OPA2")
    parser.add_argument("--t", type=float, default=None, help="beam-splitter transmissivity")
    parser.add_argument("--phase", type=float, default=None, help="interferometer phase (default pi)")
    parser.add_argument("--loss-detect", type=float, default=None, help="detection loss per homodyne")
    parser.add_argument("--loss-internal", type=float, default=None, help="arm loss between the OPAs")
    parser.add_argument("--k", type=float, default=None, help="post-detection weight (default G2/g2)")
    parser.add_argument("--eps", type=float, default=None, help="amplitude modulation depth")
    parser.add_argument("--delta", type=float, default=None, help="phase modulation depth")
    parser.add_argument("--gamma", type=float, default=None, help="polar signal depth")
    parser.add_argument("--theta", type=float, default=None, help="polar signal angle (rad)")
    parser.add_argument("--thetas", type=str, default=None,
                        help="comma-separated readout angles for sui_split3")


def _params_from(values: dict) -> SchemeParams:
    kwargs = {name: values[name] for name in _PARAM_FIELDS if values.get(name) is not None}
    return SchemeParams(**kwargs)


def _signal_from(values: dict) -> ModulationSignal:
    if values.get("gamma") is not None or values.get("theta") is not None:
        gamma = values.get("gamma") if values.get("gamma") is not None else 0.01
        theta = values.get("theta") if values.get("theta") is not None else 0.0
        return ModulationSignal.polar(gamma, theta)
    eps = values.get("eps") if values.get("eps") is not None else 0.01
    delta = values.get("delta") if values.get("delta") is not None else 0.01
    return ModulationSignal(eps, delta)


def _thetas_from(values: dict) -> tuple[float, float, float] | None:
    raw = values.get("thetas")
    if raw is None:
        return None
    parts = [p for p in str(raw).split(",") if p.strip()]
    if len(parts) != 3:
        raise UsageError("--thetas needs exactly three comma-separated angles")
    return tuple(float(p) for p in parts)


def report_json_dict(report: SchemeReport) -> dict:
    return {
        "scheme": report.scheme,
        "params": {"alpha_sq": report.alpha_sq},
        "i_ps": report.i_ps,
        "sql": {label: _num(v) for label, v in report.sql.items()},
        "observables": [
            {
                "label": label,
                "snr": _num(res.snr),
                "snr_db": _num(res.snr_db),
                "enhancement_db": _num(report.enhancement_db(label)),
                "signal_power": _num(res.signal_power),
                "noise_power": _num(res.noise_power),
            }
            for label, res in report.observables.items()
        ],
    }


def _print_table(report: SchemeReport, analytic: SchemeReport | None) -> None:
    print(f"scheme: {report.scheme}")
    print(f"i_ps = {report.i_ps:.6g}   alpha_sq = {report.alpha_sq:.6g}")
    header = f"{'observable':<12}{'signal_power':>14}{'noise_power':>14}{'snr':>12}{'snr_db':>9}{'sql':>12}{'enh_db':>9}"
    print(header)
    for label, res in report.observables.items():
        enh = report.enhancement_db(label)
        print(
            f"{label:<12}{res.signal_power:>14.6g}{res.noise_power:>14.6g}"
            f"{res.snr:>12.6g}{res.snr_db:>9.2f}{report.sql[label]:>12.6g}"
            f"{enh:>9.2f}"
        )
    for key, value in report.extras.items():
        print(f"{key} = {value:.6g}")
    if analytic is not None:
        worst = 0.0
        for label, res in report.observables.items():
            ref = analytic.observables[label]
            for got, want in ((res.snr, ref.snr), (res.signal_power, ref.signal_power),
                              (res.noise_power, ref.noise_power)):
                if want != 0.0:
                    worst = max(worst, abs(got - want) / abs(want))
        print(f"analytic cross-check: max relative difference {worst:.3g}")


def cmd_eval(args: argparse.Namespace) -> int:
    values = vars(args)
    params = _params_from(values)
    signal = _signal_from(values)
    thetas = _thetas_from(values)
    if args.circuit:
        circuit = dsl.parse_file(args.circuit)
        report = evaluate_circuit(circuit, params.alpha_sq, Path(args.circuit).stem)
        analytic = None
    else:
        circuit = build_circuit(args.scheme, params, signal, thetas)
        report = evaluate_circuit(circuit, params.alpha_sq, args.scheme)
        analytic = _analytic_reference(args.scheme, params, signal, thetas)
    if args.json:
        print(json.dumps(report_json_dict(report), indent=2))
    else:
        _print_table(report, analytic)
    return 0


def _analytic_reference(scheme, params, signal, thetas) -> SchemeReport | None:
    try:
        if scheme == "sui_split3":
            signals = split3_signals_from(signal) if thetas is None else split3_signals_from(signal, thetas)
            return snr_sui_split3(params, signals, mode="analytic")
        return snr_scheme(scheme, params, signal, mode="analytic")
    except ValueError:
        return None  # e.g. off the dark fringe: numeric only


def cmd_figure(args: argparse.Namespace) -> int:
    names = FIGURES if args.name == "all" else (args.name,)
    for name in names:
        paths = write_figure(name, args.out)
        for path in paths:
            print(path)
    return 0


def _sweep_workers() -> int:
    workers = min(8, os.cpu_count() or 1)
    cap = os.environ.get("SUILAB_THREADS")
    if cap:
        try:
            workers = max(1, min(workers, int(cap)))
        except ValueError:
            raise UsageError(f"SUILAB_THREADS must be an integer, got {cap!r}") from None
    return workers


def _load_config(path: str) -> dict:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise OSError(f"cannot read config file {path}")
    if "sweep" not in parser:
        raise UsageError(f"config file {path} has no [sweep] section")
    values: dict = {}
    numeric = set(_PARAM_FIELDS) | set(_SIGNAL_FIELDS) | {"start", "stop"}
    for key, raw in parser["sweep"].items():
        key = key.replace("-", "_")
        if key in numeric:
            values[key] = float(raw)
        elif key == "count":
            values[key] = int(raw)
        else:
            values[key] = raw
    return values


def _merge_sweep_spec(args: argparse.Namespace) -> dict:
    values = _load_config(args.config) if args.config else {}
    for key, val in vars(args).items():
        if key in ("func", "config"):
            continue
        if val is not None:
            values[key] = val
    values.setdefault("grid", "lin")
    values.setdefault("observables", None)
    return values


def _validate_sweep(values: dict) -> None:
    scheme = values.get("scheme")
    circuit = values.get("circuit")
    if bool(scheme) == bool(circuit):
        raise UsageError("sweep needs exactly one of scheme or circuit")
    if scheme and scheme not in SCHEMES:
        raise UsageError(f"unknown scheme {scheme!r}")
    param = values.get("param")
    if not param:
        raise UsageError("missing swept parameter (--param)")
    if param not in _SWEEPABLE:
        raise UsageError(f"cannot sweep {param!r}; choose from {', '.join(_SWEEPABLE)}")
    if circuit and param != "alpha_sq":
        raise UsageError("circuit sweeps support only the alpha_sq parameter; "
                         "element parameters live inside the .qnd file")
    for key in ("start", "stop", "count"):
        if values.get(key) is None:
            raise UsageError(f"missing sweep {key}")
    if values["count"] < 2:
        raise UsageError("sweep count must be >= 2")
    if not values["start"] < values["stop"]:
        raise UsageError("sweep start must be < stop")
    if values["grid"] not in ("lin", "log"):
        raise UsageError("grid must be 'lin' or 'log'")
    if values["grid"] == "log" and values["start"] <= 0.0:
        raise UsageError("log grid needs start > 0")
    if not values.get("out"):
        raise UsageError("missing output path (--out)")


def _sweep_point(values: dict, param: str, value: float, parsed_circuit) -> SchemeReport:
    point = dict(values)
    point[param] = value
    params = _params_from(point)
    if parsed_circuit is not None:
        return evaluate_circuit(parsed_circuit, params.alpha_sq, Path(values["circuit"]).stem)
    signal = _signal_from(point)
    thetas = _thetas_from(point)
    circuit = build_circuit(values["scheme"], params, signal, thetas)
    return evaluate_circuit(circuit, params.alpha_sq, values["scheme"])


def cmd_sweep(args: argparse.Namespace) -> int:
    values = _merge_sweep_spec(args)
    _validate_sweep(values)
    param = values["param"]
    if values["grid"] == "log":
        grid = np.geomspace(values["start"], values["stop"], values["count"])
    else:
        grid = np.linspace(values["start"], values["stop"], values["count"])
    grid = [float(v) for v in grid]
    parsed_circuit = dsl.parse_file(values["circuit"]) if values.get("circuit") else None

    with ThreadPoolExecutor(max_workers=_sweep_workers()) as pool:
        reports = list(pool.map(lambda v: _sweep_point(values, param, v, parsed_circuit), grid))

    wanted = None
    if values.get("observables"):
        wanted = [s.strip() for s in str(values["observables"]).split(",") if s.strip()]
        known = reports[0].labels()
        for label in wanted:
            if label not in known:
                raise UsageError(f"unknown observable {label!r}; this run reports {', '.join(known)}")

    out = Path(values["out"])
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    fixed = {k: values[k] for k in (*_PARAM_FIELDS, *_SIGNAL_FIELDS, "scheme", "circuit", "thetas")
             if values.get(k) is not None and k != param}
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# swept = {param}\n")
        fh.write(f"# grid = {values['grid']} [{_fmt(values['start'])}, {_fmt(values['stop'])}] n={values['count']}\n")
        for key in sorted(fixed):
            fh.write(f"# {key} = {fixed[key]}\n")
        fh.write(CSV_HEADER + "\n")
        for value, report in zip(grid, reports):
            for label, res in report.observables.items():
                if wanted is not None and label not in wanted:
                    continue
                fh.write(
                    f"{_fmt(value)},{label},{_fmt(res.signal_power)},{_fmt(res.noise_power)},"
                    f"{_fmt(res.snr)},{_fmt(res.snr_db)}\n"
                )
    print(out)
    return 0


def cmd_parse_check(args: argparse.Namespace) -> int:
    circuit = dsl.parse_file(args.path)
    print(f"OK: {circuit.n_modes} modes, {len(circuit.elements)} elements, "
          f"{len(circuit.readouts)} readouts")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="suilab", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a scheme or .qnd circuit")
    group = p_eval.add_mutually_exclusive_group(required=True)
    group.add_argument("--scheme", choices=SCHEMES)
    group.add_argument("--circuit", help="path to a .qnd file")
    _add_param_flags(p_eval)
    p_eval.add_argument("--json", action="store_true", help="emit the JSON report")
    p_eval.set_defaults(func=cmd_eval)

    p_fig = sub.add_parser("figure", help="emit figure CSV curves + SVG")
    p_fig.add_argument("name", choices=(*FIGURES, "all"))
    p_fig.add_argument("--out", default="figures", help="output directory")
    p_fig.set_defaults(func=cmd_figure)

    p_sweep = sub.add_parser("sweep", help="sweep one parameter over a grid")
    p_sweep.add_argument("--config", default=None, help="key=value config file with a [sweep] section")
    p_sweep.add_argument("--scheme", choices=SCHEMES, default=None)
    p_sweep.add_argument("--circuit", default=None)
    p_sweep.add_argument("--param", default=None, help=f"swept parameter ({', '.join(_SWEEPABLE)})")
    p_sweep.add_argument("--start", type=float, default=None)
    p_sweep.add_argument("--stop", type=float, default=None)
    p_sweep.add_argument("--count", type=int, default=None)
    p_sweep.add_argument("--grid", choices=("lin", "log"), default=None)
    p_sweep.add_argument("--observables", default=None, help="comma-separated label filter")
    p_sweep.add_argument("--out", default=None, help="output CSV path")
    _add_param_flags(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_check = sub.add_parser("parse-check", help="validate a .qnd circuit file")
    p_check.add_argument("path")
    p_check.set_defaults(func=cmd_parse_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, dsl.ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
