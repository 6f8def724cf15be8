"""Command-line front end emitting CSV tables and JSON verification reports.

Subcommands:

  h3       hyperbolic-space entropy sweep over a time grid
  evolve   spectral trace plus bound reports for a manifold fixture
  bounds   closed-form right-hand-side tables for a manifold fixture
  verify   run the verification suite and emit a JSON report

Numbers are serialised in shortest-roundtrip decimal, CSV uses a mandatory
header row with LF line endings, and identical configurations produce
byte-identical output.  Exit status: 0 success, 1 verification failure,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from . import bounds as bd
from . import fixtures as fx
from . import h3entropy as h3
from . import spectral as sp
from . import verify as vf
from .quadrature import QuadratureConvergenceError, QuadratureDomainError, QuadratureSpec

H3_COLUMNS = [
    "t", "entropy", "I1", "I2", "rate_direct", "rate_fd",
    "eta", "eta_lower", "eta_upper", "etap", "etap_lower", "etap_upper",
    "band_lo", "band_hi",
]

_DEFAULTS = {
    "kappa": 1.0,
    "t_start": 0.1,
    "t_stop": 100.0,
    "t_count": 40,
    "t_scale": "log",
    "manifold": "circle",
    "format": "csv",
    "out": None,
    "only": None,
    "rtol": 1e-10,
    "atol": 1e-14,
    "dt": 1e-3,
    "inject_fault": None,
}


class UsageError(ValueError):
    """Bad flags or config; maps to exit status 2."""


def _fmt(x) -> str:
    return repr(float(x))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heatent",
        description="Entropy and entropy-rate of heat flow on model manifolds.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, time_grid: bool = True):
        p.add_argument("--config", type=str, default=None,
                       help="JSON file of flag defaults; explicit flags win")
        p.add_argument("--rtol", type=float, default=None,
                       help="quadrature relative tolerance")
        p.add_argument("--atol", type=float, default=None,
                       help="quadrature absolute tolerance")
        p.add_argument("--out", type=str, default=None,
                       help="output path (default: stdout)")
        if time_grid:
            p.add_argument("--t-start", type=float, default=None)
            p.add_argument("--t-stop", type=float, default=None)
            p.add_argument("--t-count", type=int, default=None)
            p.add_argument("--t-scale", choices=("lin", "log"), default=None)

    p_h3 = sub.add_parser("h3", help="hyperbolic-space entropy sweep")
    p_h3.add_argument("--kappa", type=float, default=None)
    p_h3.add_argument("--format", choices=("csv", "json"), default=None)
    add_common(p_h3)

    p_ev = sub.add_parser("evolve", help="spectral trace plus bound reports")
    p_ev.add_argument("--manifold",
                      choices=("circle", "torus", "sphere", "torus-drift"),
                      default=None)
    p_ev.add_argument("--dt", type=float, default=None,
                      help="time step for the drifted torus")
    p_ev.add_argument("--format", choices=("csv", "json"), default=None)
    add_common(p_ev)

    p_bd = sub.add_parser("bounds", help="closed-form bound tables")
    p_bd.add_argument("--manifold",
                      choices=("circle", "torus", "sphere", "torus-drift"),
                      default=None)
    p_bd.add_argument("--format", choices=("csv", "json"), default=None)
    add_common(p_bd)

    p_vf = sub.add_parser("verify", help="run the verification suite")
    p_vf.add_argument("--only", type=str, default=None,
                      help="run a single named check group")
    p_vf.add_argument("--inject-fault", type=str, default=None,
                      help="debug: force a named check to fail "
                           "(supported: envelopes)")
    add_common(p_vf, time_grid=False)

    return parser


def _resolve(args: argparse.Namespace, key: str):
    value = getattr(args, key, None)
    if value is not None:
        return value
    config = getattr(args, "_config", {})
    if key in config:
        return config[key]
    return _DEFAULTS.get(key)


def _load_config(args: argparse.Namespace) -> None:
    path = getattr(args, "config", None)
    if path is None:
        args._config = {}
        return
    try:
        with open(path, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(config, dict):
        raise UsageError("config file must hold a JSON object")
    unknown = set(config) - set(_DEFAULTS)
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    args._config = config


def _time_grid(args: argparse.Namespace) -> np.ndarray:
    start = float(_resolve(args, "t_start"))
    stop = float(_resolve(args, "t_stop"))
    count = int(_resolve(args, "t_count"))
    scale = _resolve(args, "t_scale")
    if start <= 0.0 or stop < start or count < 1:
        raise UsageError("need 0 < t-start <= t-stop and t-count >= 1")
    if count == 1:
        return np.array([start])
    if scale == "log":
        return np.geomspace(start, stop, count)
    return np.linspace(start, stop, count)


def _quadrature_spec(args: argparse.Namespace) -> QuadratureSpec:
    try:
        return QuadratureSpec(
            relative_tolerance=float(_resolve(args, "rtol")),
            absolute_tolerance=float(_resolve(args, "atol")))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _csv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, (int, float, np.floating))
                              else str(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def cmd_h3(args: argparse.Namespace) -> int:
    kappa = float(_resolve(args, "kappa"))
    if kappa <= 0.0:
        raise UsageError("kappa must be positive")
    times = _time_grid(args)
    params = h3.H3Params(kappa, _quadrature_spec(args))
    records = h3.evaluate_records(params, times)

    rows = []
    all_ok = True
    for rec in records:
        all_ok = all_ok and rec.envelope_ok and rec.band_ok(kappa)
        rows.append([
            rec.t, rec.entropy, rec.I1, rec.I2, rec.rate_direct, rec.rate_fd,
            rec.eta.value(), rec.eta_lower.value(), rec.eta_upper.value(),
            rec.etap.value(), rec.etap_lower.value(), rec.etap_upper.value(),
            rec.band_lo, rec.band_hi,
        ])

    if _resolve(args, "format") == "json":
        payload = [dict(zip(H3_COLUMNS, [float(v) for v in row])) for row in rows]
        _emit(_json_text(payload), _resolve(args, "out"))
    else:
        _emit(_csv(H3_COLUMNS, rows), _resolve(args, "out"))
    if not all_ok:
        sys.stderr.write("h3: envelope or band check failed\n")
        return 1
    return 0


def _grid_requested(args: argparse.Namespace) -> bool:
    config = getattr(args, "_config", {})
    return any(
        getattr(args, key, None) is not None or key in config
        for key in ("t_start", "t_stop", "t_count", "t_scale"))


def _fixture_trace(args: argparse.Namespace):
    fixture = fx.get_fixture(_resolve(args, "manifold"))
    dt = float(_resolve(args, "dt"))
    times = _time_grid(args) if _grid_requested(args) else fixture.default_times
    trace = sp.entropy_trace(
        fixture.initial, times,
        dt=dt if fixture.manifold.kind == "torus2_drift" else None)
    return fixture, trace


def cmd_evolve(args: argparse.Namespace) -> int:
    fixture, trace = _fixture_trace(args)
    reports = bd.check_bounds(trace, fixture.manifold, fixture.initial)

    header = ["t", "entropy", "fisher", "rate_direct", "rate_fd"]
    for report in reports:
        header += [f"rhs_{report.bound_name}", f"ok_{report.bound_name}"]
    rows = []
    for i, t in enumerate(trace.times):
        row = [t, trace.entropy[i], trace.fisher[i],
               trace.rate_direct[i], trace.rate_fd[i]]
        for report in reports:
            row += [report.rhs[i], int(report.satisfied[i])]
        rows.append(row)

    if _resolve(args, "format") == "json":
        payload = {
            "manifold": fixture.name,
            "trace": [
                {
                    "t": float(trace.times[i]),
                    "entropy": float(trace.entropy[i]),
                    "fisher": float(trace.fisher[i]),
                    "rate_direct": float(trace.rate_direct[i]),
                    "rate_fd": float(trace.rate_fd[i]),
                }
                for i in range(trace.times.size)
            ],
            "reports": [
                {
                    "bound_name": r.bound_name,
                    "rhs": [float(v) for v in r.rhs],
                    "satisfied": [bool(v) for v in r.satisfied],
                    "min_margin": float(r.min_margin),
                }
                for r in reports
            ],
        }
        _emit(_json_text(payload), _resolve(args, "out"))
    else:
        _emit(_csv(header, rows), _resolve(args, "out"))

    if not all(r.all_satisfied for r in reports):
        bad = [r.bound_name for r in reports if not r.all_satisfied]
        sys.stderr.write(f"evolve: bound(s) violated: {', '.join(bad)}\n")
        return 1
    return 0


def cmd_bounds(args: argparse.Namespace) -> int:
    fixture = fx.get_fixture(_resolve(args, "manifold"))
    times = _time_grid(args)
    manifold = fixture.manifold
    _, q0 = sp.entropy_and_fisher(fixture.initial)
    n = manifold.dimension
    k = manifold.ricci_lower_bound

    if manifold.kind == "torus2_drift":
        header = ["t", "drift_curvature", "euclidean_reference"]
        rows = [[t, 0.5 * math.exp(-k * t) * q0,
                 bd.euclidean_rate_reference(n, t)] for t in times]
    else:
        inf_f, sup_f = sp.grid_extrema(fixture.initial)
        sup_rel = sup_f * manifold.volume
        lam1 = sp.spectral_gap(manifold)
        norm_lap = sp.laplacian_l2_norm(fixture.initial)
        header = ["t", "ricci_curvature", "gradient_log_sup", "spectral_gap",
                  "euclidean_reference"]
        rows = [[t,
                 bd.ricci_bound_rhs(n, k, q0, t),
                 bd.hamilton_bound_rhs(min(k, 0.0), sup_rel, t),
                 bd.spectral_gap_bound_rhs(lam1, norm_lap, manifold.volume,
                                           inf_f, sup_f, t),
                 bd.euclidean_rate_reference(n, t)] for t in times]

    if _resolve(args, "format") == "json":
        payload = [dict(zip(header, [float(v) for v in row])) for row in rows]
        _emit(_json_text(payload), _resolve(args, "out"))
    else:
        _emit(_csv(header, rows), _resolve(args, "out"))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    only = _resolve(args, "only")
    fault = _resolve(args, "inject_fault")
    if fault is not None and fault != "envelopes":
        raise UsageError(f"unsupported fault {fault!r}; supported: envelopes")
    try:
        results = vf.run_checks(only=only, spec=_quadrature_spec(args),
                                inject_fault=fault)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    payload = {
        name: {
            "pass": result.passed,
            "max_error": float(result.max_error),
            "details": result.details,
        }
        for name, result in results.items()
    }
    _emit(_json_text(payload), _resolve(args, "out"))
    failed = [name for name, result in results.items() if not result.passed]
    if failed:
        sys.stderr.write(f"verify: failed checks: {', '.join(failed)}\n")
        return 1
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _load_config(args)
        if args.command == "h3":
            return cmd_h3(args)
        if args.command == "evolve":
            return cmd_evolve(args)
        if args.command == "bounds":
            return cmd_bounds(args)
        return cmd_verify(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (QuadratureDomainError, QuadratureConvergenceError) as exc:
        sys.stderr.write(f"quadrature failure: {exc}\n")
        return 1
    except (sp.PositivityError, sp.SpectralTruncationError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
