"""Command line for data files, figures and verification reports.

Subcommands:

  surface     impurity over an (r, theta) grid, row per grid point
  curves      impurity versus theta for several squeezing values
  log-curves  log10(1 - impurity) versus theta, stable at extreme squeezing
  width       transition width at a level, with consecutive-ratio column
  verify      closed form vs covariance vs phase-space quadrature (json)
  mub-check   basis-overlap moduli, label independence, Fourier phases (json)

Every subcommand accepts the full flag set; each consumes the subset it
documents. Settings resolve in three layers: built-in defaults, then a flat
key=value config file (--config), then explicit flags. Identical resolved
settings produce byte-identical output files, whatever the thread count.

Data files are CSV by default (header line, floats at 17 significant digits)
or JSON on request; verify and mub-check always emit JSON reports whose exit
status mirrors their overall pass flag.
"""

import argparse
import cmath
import json
import math
import sys

import numpy as np

from .figures import (
    curves_figure,
    log_curves_figure,
    save_figure,
    surface_figure,
    width_figure,
)
from .mub import (
    ExtrapolationError,
    fourier_check,
    overlap_modulus,
    predicted_overlap_modulus,
)
from .tmss import (
    MATRIX_R_MAX,
    R_MAX,
    TmssParams,
    impurity_closed_form,
    impurity_from_covariance,
    theta_tmss_covariance,
    transition_width,
)
from .wigner import GridResolutionError, QuadratureGrid, moment_errors, quadrature_impurity

__all__ = ["main", "build_parser", "DEFAULTS"]

_HALF_PI = 0.5 * math.pi
_DEFAULT_R_LIST = (0.5, 1.0, 2.0, 3.0, 5.0)
# base angle against which the mub-check separation cases are measured
_MUB_BASE_ANGLE = 0.4
# below this closed-form impurity the quadrature comparison switches from
# the configured tolerance to a tight absolute bound
_SMALL_IMPURITY = 1e-3
_SMALL_IMPURITY_TOL = 1e-6
# dual-path agreement bound: relative plus an absolute floor for the nearly
# pure corners where 1 - purity cancels to the last few bits
_DUAL_RTOL = 1e-12
_DUAL_ATOL = 1e-13

DEFAULTS = {
    "surface": {
        "r_min": 0.0,
        "r_max": 2.0,
        "r_steps": 81,
        "theta_min": 0.0,
        "theta_max": _HALF_PI,
        "theta_steps": 181,
        "format": "csv",
        "fig": None,
    },
    "curves": {
        "r_list": list(_DEFAULT_R_LIST),
        "theta_min": 0.0,
        "theta_max": 2.0 * math.pi,
        "theta_steps": 721,
        "format": "csv",
        "fig": None,
    },
    "log-curves": {
        "r_list": list(_DEFAULT_R_LIST),
        "theta_min": _HALF_PI - 0.1,
        "theta_max": _HALF_PI + 0.1,
        "theta_steps": 401,
        "format": "csv",
        "fig": None,
    },
    "width": {
        "r_list": [1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
        "level": 0.5,
        "format": "csv",
        "fig": None,
    },
    "verify": {
        "r_list": [0.0, 0.25, 0.5, 0.75, 1.0],
        "theta_list": [0.0, math.pi / 6.0, math.pi / 3.0, _HALF_PI, 2.0],
        "grid_n": 160,
        "grid_sigmas": 8.0,
        "tol": 1e-4,
        "format": "json",
    },
    "mub-check": {
        "dtheta_list": [math.pi / 6.0, math.pi / 4.0, _HALF_PI],
        "pairs": 20,
        "fourier_cases": 10,
        "tol": 1e-3,
        "seed": 1234,
        "format": "json",
    },
}
for _cfg in DEFAULTS.values():
    _cfg["out"] = None
    _cfg["threads"] = 1

_LIST_KEYS = {"r_list", "theta_list", "dtheta_list"}
_INT_KEYS = {"r_steps", "theta_steps", "grid_n", "threads", "pairs", "fourier_cases", "seed"}
_FLOAT_KEYS = {"r_min", "r_max", "theta_min", "theta_max", "grid_sigmas", "tol", "level"}
_STRING_KEYS = {"out", "fig", "format"}
_ALL_KEYS = _LIST_KEYS | _INT_KEYS | _FLOAT_KEYS | _STRING_KEYS


def _float_list(text: str):
    return [float(part) for part in (p.strip() for p in text.split(",")) if part]


def _add_flags(sub: argparse.ArgumentParser) -> None:
    grid = sub.add_argument_group("ranges and grids")
    grid.add_argument("--r-min", type=float, help="lower end of the squeezing range")
    grid.add_argument("--r-max", type=float, help="upper end of the squeezing range")
    grid.add_argument("--r-steps", type=int, help="number of r grid points")
    grid.add_argument("--r-list", type=_float_list, metavar="R1,R2,...",
                      help="explicit squeezing values")
    grid.add_argument("--theta-min", type=float, help="lower end of the angle range")
    grid.add_argument("--theta-max", type=float, help="upper end of the angle range")
    grid.add_argument("--theta-steps", type=int, help="number of theta grid points")
    grid.add_argument("--theta-list", type=_float_list, metavar="T1,T2,...",
                      help="explicit angles (verify)")
    grid.add_argument("--dtheta-list", type=_float_list, metavar="D1,D2,...",
                      help="basis separations (mub-check)")
    grid.add_argument("--grid-n", type=int,
                      help="points per quadrature axis for phase-space sums")
    grid.add_argument("--grid-sigmas", type=float,
                      help="half extent of each axis, in standard deviations")
    run = sub.add_argument_group("run control")
    run.add_argument("--tol", type=float, help="pass/fail tolerance for checks")
    run.add_argument("--level", type=float, help="impurity level for width (in (0,1))")
    run.add_argument("--pairs", type=int, help="random label pairs (mub-check)")
    run.add_argument("--fourier-cases", type=int,
                     help="random Fourier phase cases (mub-check)")
    run.add_argument("--seed", type=int, help="seed for the randomized checks")
    run.add_argument("--threads", type=int, help="worker threads for grid sums")
    out = sub.add_argument_group("output")
    out.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    out.add_argument("--format", choices=("csv", "json"), help="data file format")
    out.add_argument("--fig", metavar="PATH",
                     help="also render the matching figure to this file")
    out.add_argument("--config", metavar="PATH",
                     help="flat key=value settings file; flags override it")


def _read_config_file(path: str) -> dict:
    values = {}
    with open(path) as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, text = line.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key = key.strip().replace("-", "_")
            text = text.strip()
            if key not in _ALL_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown setting {key!r}")
            try:
                if key in _LIST_KEYS:
                    values[key] = _float_list(text)
                elif key in _INT_KEYS:
                    values[key] = int(text)
                elif key in _FLOAT_KEYS:
                    values[key] = float(text)
                else:
                    values[key] = text
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: bad value for {key}: {exc}") from None
    return values


def _resolve(command: str, args: argparse.Namespace) -> dict:
    cfg = {key: (list(v) if isinstance(v, list) else v)
           for key, v in DEFAULTS[command].items()}
    if args.config is not None:
        for key, value in _read_config_file(args.config).items():
            if key in cfg:
                cfg[key] = value
    for key in cfg:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    _validate(command, cfg)
    return cfg


def _check_steps(count, name: str) -> None:
    if count < 2:
        raise ValueError(f"{name} must be at least 2, got {count}")


def _check_range(lo, hi, name: str) -> None:
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
        raise ValueError(f"{name} range [{lo}, {hi}] is degenerate")


def _validate(command: str, cfg: dict) -> None:
    if cfg["threads"] < 1:
        raise ValueError(f"threads must be at least 1, got {cfg['threads']}")
    if cfg["format"] not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {cfg['format']!r}")
    if command in ("verify", "mub-check") and cfg["format"] != "json":
        raise ValueError(f"{command} emits a json report; csv is not available")
    if command == "surface":
        _check_steps(cfg["r_steps"], "r-steps")
        _check_steps(cfg["theta_steps"], "theta-steps")
        _check_range(cfg["r_min"], cfg["r_max"], "r")
        _check_range(cfg["theta_min"], cfg["theta_max"], "theta")
        if cfg["r_min"] < 0.0 or cfg["r_max"] > R_MAX:
            raise ValueError(f"r range must lie inside [0, {R_MAX:g}]")
        if cfg["theta_min"] < 0.0 or cfg["theta_max"] > 2.0 * math.pi:
            raise ValueError("theta range must lie inside [0, 2*pi]")
    elif command in ("curves", "log-curves"):
        _check_steps(cfg["theta_steps"], "theta-steps")
        _check_range(cfg["theta_min"], cfg["theta_max"], "theta")
        if not cfg["r_list"]:
            raise ValueError("r-list must not be empty")
        for r in cfg["r_list"]:
            if not 0.0 <= r <= R_MAX:
                raise ValueError(f"r values must lie in [0, {R_MAX:g}], got {r}")
    elif command == "width":
        if not cfg["r_list"]:
            raise ValueError("r-list must not be empty")
        for r in cfg["r_list"]:
            if not 1.0 <= r <= R_MAX:
                raise ValueError(f"width needs r in [1, {R_MAX:g}], got {r}")
        if not 0.0 < cfg["level"] < 1.0:
            raise ValueError(f"level must lie strictly inside (0, 1), got {cfg['level']}")
    elif command == "verify":
        if not cfg["r_list"]:
            raise ValueError("r-list must not be empty")
        for r in cfg["r_list"]:
            if not 0.0 <= r <= MATRIX_R_MAX:
                raise ValueError(
                    f"verify exercises the covariance path, r must lie in "
                    f"[0, {MATRIX_R_MAX:g}]; got {r}")
        if not cfg["theta_list"]:
            raise ValueError("theta-list must not be empty")
        for theta in cfg["theta_list"]:
            if not np.isfinite(theta):
                raise ValueError(f"theta values must be finite, got {theta}")
        if cfg["grid_n"] < 32:
            raise ValueError(f"grid-n must be at least 32, got {cfg['grid_n']}")
        if cfg["grid_sigmas"] < 6.0:
            raise ValueError(f"grid-sigmas must be at least 6, got {cfg['grid_sigmas']}")
        if cfg["tol"] <= 0.0:
            raise ValueError("tol must be positive")
    elif command == "mub-check":
        if not cfg["dtheta_list"]:
            raise ValueError("dtheta-list must not be empty")
        for dtheta in cfg["dtheta_list"]:
            if not 0.0 < dtheta < math.pi - _MUB_BASE_ANGLE - 1e-6:
                raise ValueError(
                    f"separations must lie in (0, pi - {_MUB_BASE_ANGLE}), got {dtheta}")
            if abs(math.sin(dtheta)) <= 1e-3:
                raise ValueError(f"separation {dtheta} leaves the bases degenerate")
        if cfg["pairs"] < 1:
            raise ValueError("pairs must be at least 1")
        if cfg["fourier_cases"] < 0:
            raise ValueError("fourier-cases must be nonnegative")
        if cfg["tol"] <= 0.0:
            raise ValueError("tol must be positive")


def _format_float(value: float) -> str:
    return "{:.17g}".format(value)


def _table_text(cfg: dict, columns, rows) -> str:
    if cfg["format"] == "csv":
        lines = [",".join(columns)]
        for row in rows:
            lines.append(",".join("" if v is None else _format_float(v) for v in row))
        return "\n".join(lines) + "\n"
    return json.dumps({"columns": list(columns), "rows": rows}, indent=2) + "\n"


def _write_output(path, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        # newline='' keeps the emitted bytes platform-independent
        with open(path, "w", newline="") as handle:
            handle.write(text)


def cmd_surface(cfg: dict) -> int:
    r_values = np.linspace(cfg["r_min"], cfg["r_max"], cfg["r_steps"])
    theta_values = np.linspace(cfg["theta_min"], cfg["theta_max"], cfg["theta_steps"])
    grid = np.empty((r_values.size, theta_values.size))
    for i, r in enumerate(r_values):
        for j, theta in enumerate(theta_values):
            grid[i, j] = impurity_closed_form(TmssParams(float(r), float(theta))).value
    rows = [
        [float(r_values[i]), float(theta_values[j]), float(grid[i, j])]
        for i in range(r_values.size)
        for j in range(theta_values.size)
    ]
    _write_output(cfg["out"], _table_text(cfg, ("r", "theta", "impurity"), rows))
    if cfg["fig"]:
        save_figure(surface_figure(r_values, theta_values, grid), cfg["fig"])
    return 0


def cmd_curves(cfg: dict) -> int:
    theta_values = np.linspace(cfg["theta_min"], cfg["theta_max"], cfg["theta_steps"])
    curves = np.empty((len(cfg["r_list"]), theta_values.size))
    rows = []
    for i, r in enumerate(cfg["r_list"]):
        for j, theta in enumerate(theta_values):
            value = impurity_closed_form(TmssParams(float(r), float(theta))).value
            curves[i, j] = value
            rows.append([float(theta), float(r), value])
    _write_output(cfg["out"], _table_text(cfg, ("theta", "r", "impurity"), rows))
    if cfg["fig"]:
        save_figure(curves_figure(theta_values, cfg["r_list"], curves), cfg["fig"])
    return 0


def cmd_log_curves(cfg: dict) -> int:
    theta_values = np.linspace(cfg["theta_min"], cfg["theta_max"], cfg["theta_steps"])
    curves = np.empty((len(cfg["r_list"]), theta_values.size))
    rows = []
    log10 = math.log(10.0)
    for i, r in enumerate(cfg["r_list"]):
        for j, theta in enumerate(theta_values):
            result = impurity_closed_form(TmssParams(float(r), float(theta)))
            value = result.log_one_minus / log10
            curves[i, j] = value
            rows.append([float(theta), float(r), value])
    _write_output(
        cfg["out"], _table_text(cfg, ("theta", "r", "log10_one_minus_impurity"), rows)
    )
    if cfg["fig"]:
        save_figure(log_curves_figure(theta_values, cfg["r_list"], curves), cfg["fig"])
    return 0


def cmd_width(cfg: dict) -> int:
    widths = [transition_width(float(r), cfg["level"]) for r in cfg["r_list"]]
    rows = []
    for i, (r, width) in enumerate(zip(cfg["r_list"], widths)):
        ratio = None if i == 0 else width / widths[i - 1]
        rows.append([float(r), width, ratio])
    _write_output(
        cfg["out"], _table_text(cfg, ("r", "width", "ratio_to_previous"), rows)
    )
    if cfg["fig"]:
        save_figure(width_figure(cfg["r_list"], widths), cfg["fig"])
    return 0


def cmd_verify(cfg: dict) -> int:
    tol = cfg["tol"]
    threads = cfg["threads"]
    cases = []
    for r in cfg["r_list"]:
        for theta in cfg["theta_list"]:
            params = TmssParams(float(r), float(theta))
            closed = impurity_closed_form(params).value
            via_covariance = impurity_from_covariance(params)
            ok = abs(via_covariance - closed) <= _DUAL_RTOL * abs(closed) + _DUAL_ATOL
            case = {
                "r": float(r),
                "theta": float(theta),
                "impurity_closed": closed,
                "impurity_covariance": via_covariance,
            }
            if r <= 1.0:
                sigma = theta_tmss_covariance(params)
                grid = QuadratureGrid.from_covariance(
                    sigma, cfg["grid_n"], cfg["grid_sigmas"]
                )
                try:
                    quadrature = quadrature_impurity(sigma, grid, threads=threads)
                    case["impurity_quadrature"] = quadrature
                    bound = _SMALL_IMPURITY_TOL if closed < _SMALL_IMPURITY else tol
                    ok = ok and abs(quadrature - closed) <= bound
                    errors = moment_errors(sigma, grid, threads=threads)
                    zero = np.abs(sigma) <= 1e-12
                    case["max_moment_err"] = float(errors.max())
                    ok = (
                        ok
                        and bool((errors[zero] <= 1e-8).all())
                        and bool((errors[~zero] <= tol).all())
                    )
                except GridResolutionError as exc:
                    case["error"] = str(exc)
                    ok = False
            case["pass"] = ok
            cases.append(case)
    overall = all(case["pass"] for case in cases)
    report = {
        "command": "verify",
        "config": {key: cfg[key] for key in sorted(cfg)},
        "cases": cases,
        "pass": overall,
    }
    _write_output(cfg["out"], json.dumps(report, indent=2) + "\n")
    return 0 if overall else 1


def cmd_mub_check(cfg: dict) -> int:
    tol = cfg["tol"]
    rng = np.random.default_rng(cfg["seed"])
    cases = []

    for dtheta in cfg["dtheta_list"]:
        t1 = _MUB_BASE_ANGLE + float(dtheta)
        t2 = _MUB_BASE_ANGLE
        predicted = predicted_overlap_modulus(t1, t2)
        case = {"kind": "overlap", "t1": t1, "t2": t2, "y1": 0.0, "y2": 0.0,
                "predicted": predicted}
        try:
            measured = overlap_modulus(0.0, t1, 0.0, t2)
            err = abs(measured - predicted)
            case.update({"measured": measured, "err": err, "pass": err <= tol})
        except ExtrapolationError as exc:
            case.update({"error": str(exc), "pass": False})
        cases.append(case)

    # labels must not matter: same pair of bases, random eigenvalue pairs
    t1, t2 = 2.0 * math.pi / 3.0, math.pi / 6.0
    predicted = predicted_overlap_modulus(t1, t2)
    case = {"kind": "labels", "t1": t1, "t2": t2, "pairs": int(cfg["pairs"]),
            "predicted": predicted}
    try:
        labels = rng.uniform(-2.0, 2.0, size=(cfg["pairs"], 2))
        measured = [overlap_modulus(float(a), t1, float(b), t2) for a, b in labels]
        spread = max(measured) - min(measured)
        max_err = max(abs(m - predicted) for m in measured)
        case.update({
            "spread": spread,
            "max_err": max_err,
            "pass": spread <= 2.0 * tol and max_err <= tol,
        })
    except ExtrapolationError as exc:
        case.update({"error": str(exc), "pass": False})
    cases.append(case)

    expected_modulus = 1.0 / math.sqrt(2.0 * math.pi)
    for _ in range(cfg["fourier_cases"]):
        theta = float(rng.uniform(0.3, math.pi - 0.3))
        while abs(math.cos(theta)) < 0.05:
            theta = float(rng.uniform(0.3, math.pi - 0.3))
        y, k = (float(v) for v in rng.uniform(-2.0, 2.0, size=2))
        case = {"kind": "fourier", "y": y, "k": k, "theta": theta}
        try:
            value = fourier_check(y, k, theta)
            modulus_err = abs(abs(value) - expected_modulus)
            phase_err = abs(cmath.phase(value * cmath.exp(-1j * k * y)))
            case.update({
                "modulus_err": modulus_err,
                "phase_err": phase_err,
                "pass": modulus_err <= tol and phase_err <= tol,
            })
        except ExtrapolationError as exc:
            case.update({"error": str(exc), "pass": False})
        cases.append(case)

    overall = all(case["pass"] for case in cases)
    report = {
        "command": "mub-check",
        "config": {key: cfg[key] for key in sorted(cfg)},
        "cases": cases,
        "pass": overall,
    }
    _write_output(cfg["out"], json.dumps(report, indent=2) + "\n")
    return 0 if overall else 1


_COMMANDS = {
    "surface": cmd_surface,
    "curves": cmd_curves,
    "log-curves": cmd_log_curves,
    "width": cmd_width,
    "verify": cmd_verify,
    "mub-check": cmd_mub_check,
}

_HELP = {
    "surface": "impurity over an (r, theta) grid",
    "curves": "impurity versus theta for several squeezing values",
    "log-curves": "log10(1 - impurity) versus theta",
    "width": "transition width at a level, per squeezing value",
    "verify": "cross-check closed forms against brute-force integration",
    "mub-check": "verify basis-overlap moduli and Fourier phases",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thetatmss",
        description="Impurity of a rotation-parametrized two-mode squeezed family, "
                    "with brute-force verification suites.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, run in _COMMANDS.items():
        sub = subparsers.add_parser(name, help=_HELP[name])
        _add_flags(sub)
        sub.set_defaults(run=run)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args.command, args)
        return args.run(cfg)
    except (ValueError, OSError) as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
