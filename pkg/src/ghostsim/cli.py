"""``ghostsim`` command-line interface.

Exit codes: 0 success, 2 configuration or parameter error, 3 numerical
guard tripped (including a failed oracle comparison), 4 fit unavailable.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .analytic import gamma_approx, which_way_overlap
from .config import Scenario, bundled_path, load_scenario
from .errors import (
    ConfigError,
    FitUnavailableError,
    GridGuardError,
    ParameterError,
    QuadratureError,
    SingularConfigurationError,
)
from .oracle import check_feasible, compare, discretize, dump_density, run_oracle
from .physics import Mode
from .scan import (
    Particle,
    ScanRequest,
    erasure_report,
    fit_fringes,
    read_csv,
    run_scan,
    write_csv,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_GUARD = 3
EXIT_FIT = 4


def _fmt(x) -> str:
    return f"{x:.12g}"


def _emit(out, key, value):
    if isinstance(value, bool):
        value = "true" if value else "false"
    elif isinstance(value, (float, np.floating)):
        value = _fmt(value)
    print(f"{key}={value}", file=out)


def _scenario(args) -> Scenario:
    path = Path(args.scenario)
    if not path.exists() and not args.scenario.endswith((".cfg", ".ini")) and "/" not in args.scenario:
        path = bundled_path(args.scenario)
    return load_scenario(path, args.set or ())


def cmd_params(args, out) -> int:
    sc = _scenario(args)
    exp = sc.experiment
    b = exp.at_slits
    fp = exp.fringe_params()
    spread0, spread = exp.spreads
    approx = gamma_approx(sc.slits, sc.source, spread0)
    reg = exp.regime()
    k = sc.kinematics
    _emit(out, "mode", k.mode.value)
    if k.mode is Mode.DISTANCE:
        _emit(out, "D", k.D)
    _emit(out, "y0_prime_re", b.y0_prime.real)
    _emit(out, "y0_prime_im", b.y0_prime.imag)
    _emit(out, "gamma_sq_re", b.gamma_sq.real)
    _emit(out, "gamma_sq_im", b.gamma_sq.imag)
    _emit(out, "gamma_sq_approx_re", approx.value.real)
    _emit(out, "gamma_sq_approx_im", approx.value.imag)
    _emit(out, "small_gamma_sq", approx.gamma_sq)
    _emit(out, "theta1", fp.theta1)
    _emit(out, "theta2", fp.theta2)
    _emit(out, "w1", fp.w1)
    _emit(out, "w2", fp.w2)
    _emit(out, "young_w1", fp.young_w1)
    _emit(out, "young_w2", fp.young_w2)
    _emit(out, "which_way_overlap", abs(which_way_overlap(exp.branched)))
    _emit(out, "omega_over_epsilon", reg.omega_over_epsilon)
    _emit(out, "omega_sigma_over_hbar", reg.omega_sigma_over_hbar)
    _emit(out, "regime_admissible", reg.admissible)
    return EXIT_OK


def _write_scan(res, path, out):
    if path is None:
        write_csv(res, out)
        return
    write_csv(res, path)
    meta = {"scenario": res.config_snapshot, "normalization": res.normalization}
    Path(str(path) + ".json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n",
                                         encoding="utf-8")


def cmd_scan(args, out) -> int:
    sc = _scenario(args)
    d = sc.scan
    particle = Particle.parse(args.particle if args.particle is not None else d.particle)
    fixed = d.fixed
    if args.fixed is not None:
        if args.fixed.strip().lower() == "marginal":
            fixed = None
        else:
            try:
                fixed = float(args.fixed)
            except ValueError:
                raise ConfigError(f"--fixed: not a number or 'marginal': {args.fixed!r}") from None
    lo = args.min if args.min is not None else d.y_min
    hi = args.max if args.max is not None else d.y_max
    if lo is None or hi is None:
        raise ConfigError("scan range not set: give --min/--max or a [scan] section", sc.path)
    count = args.count if args.count is not None else d.count
    res = run_scan(ScanRequest(particle, fixed, lo, hi, count, sc.experiment))
    _write_scan(res, args.output, out)
    return EXIT_OK


def cmd_fringe(args, out) -> int:
    res = read_csv(args.csv)
    fit = fit_fringes(res, method=args.method)
    _emit(out, "fringe_width", fit.fringe_width)
    _emit(out, "width_stderr", fit.width_stderr)
    _emit(out, "visibility", fit.visibility)
    _emit(out, "center_offset", fit.center_offset)
    _emit(out, "peaks_used", fit.peaks_used)
    return EXIT_OK


def cmd_erasure(args, out) -> int:
    sc = _scenario(args)
    exp = sc.experiment
    w1 = exp.fringe_params().w1
    half = args.y1_span * w1 / 2.0
    y1 = np.linspace(-half, half, args.y1_count)
    d = sc.scan
    lo = args.min if args.min is not None else d.y_min
    hi = args.max if args.max is not None else d.y_max
    if lo is None or hi is None:
        raise ConfigError("particle-2 range not set: give --min/--max or a [scan] section", sc.path)
    count = args.count if args.count is not None else d.count
    rep = erasure_report(exp, y1, (lo, hi, count), weighting=args.weighting)
    if args.output is not None:
        _write_scan(rep.summed, args.output, out)
    _emit(out, "weighting", rep.weighting)
    _emit(out, "y1_span", float(y1[-1] - y1[0]))
    _emit(out, "y1_count", len(y1))
    _emit(out, "min_conditional_visibility", float(np.min(rep.visibilities)))
    _emit(out, "summed_visibility", rep.summed_visibility)
    _emit(out, "shift_slope", rep.slope)
    _emit(out, "predicted_slope", rep.predicted_slope)
    return EXIT_OK


def cmd_oracle_compare(args, out) -> int:
    sc = _scenario(args)
    exp = sc.experiment
    check_feasible(exp)
    if sc.grid is None:
        raise ConfigError("oracle-compare needs a [grid] section", sc.path)
    analytic = exp.time_domain()
    if args.self_check:
        w = discretize(analytic.branched, sc.grid)
        discarded, drift = float("nan"), 0.0
    else:
        run = run_oracle(exp, sc.grid)
        w, discarded, drift = run.final, run.discarded_fraction, run.norm_drift
    rep = compare(analytic.density, w)
    if args.dump is not None:
        dump_density(w, args.dump)
    _emit(out, "l2_relative", rep.l2_relative)
    _emit(out, "max_abs", rep.max_abs)
    _emit(out, "max_relative", rep.max_relative)
    for name, pair in (("p2", rep.fringe_p2), ("p1", rep.fringe_p1)):
        if pair is None:
            _emit(out, f"fringe_{name}", "unavailable")
        else:
            _emit(out, f"fringe_{name}_analytic", pair[0])
            _emit(out, f"fringe_{name}_grid", pair[1])
    fd = rep.fringe_discrepancy
    _emit(out, "fringe_discrepancy", "unavailable" if fd is None else fd)
    _emit(out, "discarded_fraction", discarded)
    _emit(out, "norm_drift", drift)
    _emit(out, "result", "PASS" if rep.passed else "FAIL")
    return EXIT_OK if rep.passed else EXIT_GUARD


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ghostsim",
                                description="Two-particle ghost interference with Gaussian slits.")
    sub = p.add_subparsers(dest="command", required=True)

    def scenario_args(sp):
        sp.add_argument("scenario", help="scenario file, or a bundled name (fig2, benchmark, signature)")
        sp.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE",
                        help="override a scenario value (repeatable; wins over the file)")

    def range_args(sp):
        sp.add_argument("--min", type=float, help="scan start (m)")
        sp.add_argument("--max", type=float, help="scan end (m)")
        sp.add_argument("--count", type=int, help="number of samples")

    sp = sub.add_parser("params", help="print virtual-slit and fringe parameters")
    scenario_args(sp)
    sp.set_defaults(func=cmd_params)

    sp = sub.add_parser("scan", help="write a detector scan as CSV")
    scenario_args(sp)
    sp.add_argument("--particle", help="scanned particle, 1 or 2")
    sp.add_argument("--fixed", help="partner detector position (m), or 'marginal'")
    range_args(sp)
    sp.add_argument("-o", "--output", help="CSV path (a .json sidecar is written next to it); default stdout")
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("fringe", help="fit fringe width and visibility of a scan CSV")
    sp.add_argument("csv")
    sp.add_argument("--method", choices=("spectral", "spacing"), default="spectral")
    sp.set_defaults(func=cmd_fringe)

    sp = sub.add_parser("erasure", help="sum conditional particle-2 scans over a particle-1 grid")
    scenario_args(sp)
    sp.add_argument("--y1-span", type=float, default=3.0,
                    help="width of the particle-1 grid in particle-1 fringe widths (default 3)")
    sp.add_argument("--y1-count", type=int, default=64)
    range_args(sp)
    sp.add_argument("--weighting", choices=("uniform", "marginal"), default="uniform")
    sp.add_argument("-o", "--output", help="CSV path for the summed pattern")
    sp.set_defaults(func=cmd_erasure)

    sp = sub.add_parser("oracle-compare", help="compare the closed form with the grid simulation")
    scenario_args(sp)
    sp.add_argument("--self", dest="self_check", action="store_true",
                    help="compare the closed form with its own discretization")
    sp.add_argument("--dump", help="write the grid density to this text file")
    sp.set_defaults(func=cmd_oracle_compare)
    return p


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except SingularConfigurationError as exc:
        code, message = EXIT_CONFIG, f"singular configuration: {exc}"
    except (ConfigError, ParameterError) as exc:
        code, message = EXIT_CONFIG, f"error: {exc}"
    except (GridGuardError, QuadratureError) as exc:
        code, message = EXIT_GUARD, f"numerical guard: {exc}"
    except FitUnavailableError as exc:
        code, message = EXIT_FIT, f"fit unavailable: {exc}"
    print(f"ghostsim: {message}", file=sys.stderr)
    return code

if __name__ == "__main__":
    sys.exit(main())
