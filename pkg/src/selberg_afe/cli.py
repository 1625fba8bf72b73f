"""Command line: ``selberg-afe {eval,chi,verify,scan,coeffs}``.

Rows go to stdout (or ``--out``) as CSV or JSON with the same field
names.  Exit codes: 0 success, 1 failed verification rows, 2 invalid
input or violated hypothesis, 3 I/O failure.  Every error prints one
JSON object on stderr.  ``SELBERG_AFE_THREADS`` sets the worker count;
rows are always written in grid order.
"""

from __future__ import annotations

import argparse
import contextvars
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources

import numpy as np

from . import __version__
from .afe import afe_sharp, afe_smoothed, load_calibration
from .chi import chi_asymptotic, chi_exact, chi_log_ratio, inject_chi_fault
from .descriptor import resolve_datum
from .errors import SelbergError, ValidationError
from .oracle import (CALIBRATION_TS, Report, calibrate, default_grid, euler_maclaurin_zeta, fit_slope,
                     is_zeta, residual_suite)
from .smoothing import base_bump, make_phi_alpha

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3
DEFAULT_SLOPE_TS = (50.0, 100.0, 200.0, 400.0, 800.0)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _emit_error({"error": "usage", "message": message})
        sys.exit(EXIT_INPUT)


def _emit_error(obj: dict):
    sys.stderr.write(json.dumps(obj, sort_keys=True) + "\n")


def _threads() -> int:
    raw = os.environ.get("SELBERG_AFE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError("SELBERG_AFE_THREADS", f"expected an integer, got {raw!r}") from None
    if n < 1:
        raise ValidationError("SELBERG_AFE_THREADS", "must be >= 1")
    return n


def _map(fn, items):
    """Ordered map over a thread pool; each task runs in a copy of the caller's context."""
    items = list(items)
    n = _threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        futures = [pool.submit(contextvars.copy_context().run, fn, x) for x in items]
        return [f.result() for f in futures]


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def _plain(v):
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{k: _plain(v) for k, v in r.items()} for r in rows], indent=1) + "\n"
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(rows[0].keys())
    for r in rows:
        w.writerow([_fmt(v) for v in r.values()])
    return buf.getvalue()


def _write(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _points(sigmas, ts):
    return [complex(sg, t) for t in ts for sg in sigmas]


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _phi_for(args, t):
    if args.alpha is None:
        return None
    return make_phi_alpha(base_bump(), args.alpha, t)


def cmd_eval(args) -> int:
    datum = resolve_datum(args.datum)

    def one(s):
        if args.mode == "sharp":
            res = afe_sharp(datum, s, args.m, y_split=args.y_split)
        else:
            res = afe_smoothed(datum, s, args.m, phi=_phi_for(args, s.imag), l=args.l,
                               y_split=args.y_split)
        row = {"label": datum.label, "sigma": s.real, "t": s.imag, "m": args.m,
               "mode": res.mode}
        row.update(res.as_row())
        if res.mode == "smoothed":
            row["l"] = res.diagnostics["l"]
        return row

    rows = _map(one, _points(args.sigma, args.t))
    _write(render(rows, args.output), args.out)
    return EXIT_OK


def cmd_chi(args) -> int:
    datum = resolve_datum(args.datum)

    def one(s):
        chi = chi_exact(datum, s)
        row = {"label": datum.label, "sigma": s.real, "t": s.imag,
               "chi_re": chi.real, "chi_im": chi.imag}
        for r in range(1, args.r + 1):
            ratio = chi_log_ratio(datum, s, r)
            row[f"ratio{r}_re"] = ratio.real
            row[f"ratio{r}_im"] = ratio.imag
        if abs(s.imag) >= 10:
            asym = chi_asymptotic(datum, s)
            row.update({"asym_modulus": asym.modulus, "asym_phase": asym.phase,
                        "asym_rel_budget": asym.rel_error_budget})
        return row

    rows = _map(one, _points(args.sigma, args.t))
    _write(render(rows, args.output), args.out)
    return EXIT_OK


def _verify_grid(args):
    grid = default_grid(args.sigma, args.t)
    if args.random_points:
        rng = np.random.default_rng(args.seed)
        for _ in range(args.random_points):
            sg = round(float(rng.uniform(0, 1)), 6)
            # heights stay inside the range the error constants were calibrated on
            t = round(float(rng.uniform(CALIBRATION_TS[0], CALIBRATION_TS[-1])), 6)
            grid.append(complex(sg, t))
    return grid


def cmd_verify(args) -> int:
    if args.calibrate:
        data = calibrate()
        target = args.calibration_out
        if target is None:
            target = str(resources.files("selberg_afe").joinpath("data/calibration.json"))
        _write(json.dumps(data, indent=2) + "\n", target)
        load_calibration(refresh=True)
        sys.stderr.write(f"calibration written to {target}\n")
        return EXIT_OK
    datum = resolve_datum(args.datum)
    grid = _verify_grid(args)

    def one(s):
        return residual_suite(datum, [s], args.m_max).rows

    def run():
        report = Report()
        for rows in _map(one, grid):
            report.rows.extend(rows)
        if is_zeta(datum):
            slope = residual_suite(datum, [], 0, slope_ts=DEFAULT_SLOPE_TS)
            report.rows.extend(slope.rows)
        return report

    if args.inject_chi_fault:
        with inject_chi_fault():
            report = run()
    else:
        report = run()
    text = render(report.to_records(), args.output)
    _write(text, args.report if args.report else args.out)
    failed = sum(not r["pass"] for r in report.rows)
    if failed:
        _emit_error({"error": "verification_failed", "failed_rows": failed,
                     "rows": len(report.rows)})
        return EXIT_FAIL
    return EXIT_OK


def cmd_scan(args) -> int:
    if len(args.t) < 4:
        raise ValidationError("t", f"scan needs at least 4 t-points, got {len(args.t)}")
    datum = resolve_datum(args.datum)
    zeta = is_zeta(datum)
    tasks = [(sg, m, t) for sg in args.sigma for m in args.m for t in args.t]

    def one(task):
        sg, m, t = task
        s = complex(sg, t)
        if args.mode == "sharp":
            res = afe_sharp(datum, s, m)
        else:
            res = afe_smoothed(datum, s, m)
        if zeta:
            residual = abs(res.value - euler_maclaurin_zeta(s, m))
            kind = "oracle"
        else:
            # no strip oracle: spread of the sharp equation over y-splits
            residual = max(abs(afe_sharp(datum, s, m, y_split=k).value - res.value)
                           for k in (0.5, 2.0))
            kind = "ysplit"
        return {"label": datum.label, "sigma": sg, "t": t, "m": m, "mode": args.mode,
                "value_re": res.value.real, "value_im": res.value.imag,
                "residual": residual, "residual_kind": kind, "budget": res.error_estimate}

    rows = _map(one, tasks)
    for sg in args.sigma:
        for m in args.m:
            group = [r for r in rows if r["sigma"] == sg and r["m"] == m]
            positive = [r for r in group if r["residual"] > 0]
            slope = (fit_slope([r["t"] for r in positive], [r["residual"] for r in positive])
                     if len(positive) >= 2 else float("nan"))
            for r in group:
                r["slope"] = slope
    _write(render(rows, args.output), args.out)
    return EXIT_OK


def cmd_coeffs(args) -> int:
    datum = resolve_datum(args.datum)
    a = datum.coefficients(args.n_max)
    rows = [{"n": n, "re": float(v.real), "im": float(v.imag)} for n, v in enumerate(a, 1)]
    _write(render(rows, args.output), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _nonneg_int(cap):
    def parse(v):
        try:
            n = int(v)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {v!r}") from None
        if not 0 <= n <= cap:
            raise argparse.ArgumentTypeError(f"must lie in [0, {cap}]")
        return n
    return parse


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="selberg-afe", description="Approximate functional equations for "
                "derivatives of Selberg-class L-functions.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--datum", default="zeta",
                        help="built-in label or descriptor file (default zeta)")
        sp.add_argument("--output", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--seed", type=int, default=0)

    e = sub.add_parser("eval", help="evaluate F^(m)(s)")
    common(e)
    e.add_argument("--m", type=_nonneg_int(6), default=0)
    e.add_argument("--sigma", type=float, nargs="+", required=True)
    e.add_argument("--t", type=float, nargs="+", required=True)
    e.add_argument("--mode", choices=("sharp", "smoothed"), default="sharp")
    e.add_argument("--alpha", type=float, default=None, help="use phi_alpha (smoothed mode)")
    e.add_argument("--l", type=int, default=None, help="smoothing order (default M_F+1)")
    e.add_argument("--y-split", type=float, default=None, help="ratio y1/y0")
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("chi", help="chi_F, its log-derivative ratios and asymptotics")
    common(c)
    c.add_argument("--sigma", type=float, nargs="+", required=True)
    c.add_argument("--t", type=float, nargs="+", required=True)
    c.add_argument("--r", type=_nonneg_int(12), default=1, help="highest ratio order")
    c.set_defaults(func=cmd_chi)

    v = sub.add_parser("verify", help="residual suite against oracles and identities")
    common(v)
    v.add_argument("--m-max", type=_nonneg_int(6), default=2)
    v.add_argument("--sigma", type=float, nargs="+", default=[0.0, 0.25, 0.5, 0.75, 1.0])
    v.add_argument("--t", type=float, nargs="+", default=[30.0, 60.0, 100.0, 200.0])
    v.add_argument("--random-points", type=int, default=0,
                   help="extra grid points drawn with --seed, t in [30, 400]")
    v.add_argument("--report", default=None, help="report path (default --out/stdout)")
    v.add_argument("--calibrate", action="store_true",
                   help="remeasure the error constants on zeta and write them")
    v.add_argument("--calibration-out", default=None)
    v.add_argument("--inject-chi-fault", action="store_true", help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("scan", help="residual against t with fitted slopes")
    common(s)
    s.add_argument("--sigma", type=float, nargs="+", default=[0.5])
    s.add_argument("--m", type=_nonneg_int(6), nargs="+", default=[0])
    s.add_argument("--t", type=float, nargs="+", default=list(DEFAULT_SLOPE_TS))
    s.add_argument("--mode", choices=("sharp", "smoothed"), default="sharp")
    s.set_defaults(func=cmd_scan)

    k = sub.add_parser("coeffs", help="list Dirichlet coefficients")
    common(k)
    k.add_argument("--n-max", type=int, required=True)
    k.set_defaults(func=cmd_coeffs)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "random_points", 0) < 0:
            raise ValidationError("random_points", "must be >= 0")
        _threads()
        return args.func(args)
    except SelbergError as exc:
        _emit_error(exc.to_dict())
        return EXIT_INPUT
    except OSError as exc:
        _emit_error({"error": "io", "message": str(exc)})
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
