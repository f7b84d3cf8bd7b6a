"""Command-line front end.

Subcommands
-----------
verify m n      verdict for one index (exit 0 monopole, 1 not, 2 bad index, 3 numeric failure)
scan            one row per admissible index with |m|, |n| <= --max-abs
selftest        invariant suites of every module (exit 4 on any failure)
plot m n what out
                profile data (what = H or hk) or zero branches (what = branches) as CSV
"""

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import curve_pipeline as cp
from . import jsonio
from . import plotting
from . import selftest as st
from . import specfun as sf
from . import symplectic as sp
from . import theta as th
from . import vanishing as vn

EXIT_MONOPOLE = 0
EXIT_NOT_MONOPOLE = 1
EXIT_INVALID_INDEX = 2
EXIT_NUMERIC = 3
EXIT_SELFTEST = 4

NUMERIC_ERRORS = (
    ArithmeticError,
    th.ModulusError,
    th.PoleProximityError,
    th.TruncationError,
    sp.ConditioningError,
    cp.ConventionError,
    np.linalg.LinAlgError,
)

SCAN_COLUMNS = ("m", "n", "b", "chi_cbrt", "T_imag", "zero_count", "conjectured", "match", "verdict", "error")


@dataclass(frozen=True)
class ScanConfig:
    max_abs: int = 8
    grid: int = 2048
    tol: float = 1e-9
    out: str = None
    format: str = "json"
    workers: int = 1

    def __post_init__(self):
        if self.max_abs < 1:
            raise ValueError(f"--max-abs must be at least 1, got {self.max_abs}")
        if self.grid < 512:
            raise ValueError(f"--grid must be at least 512, got {self.grid}")
        if self.format not in ("json", "csv"):
            raise ValueError(f"--format must be json or csv, got {self.format}")


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {out}: {exc.strerror}") from exc


def _csv_text(rows):
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _json_text(obj):
    return json.dumps(jsonio.encode(obj), indent=2, sort_keys=True) + "\n"


def _canonical(m, n):
    idx = cp.MonopoleIndex(m, n)
    if idx.flipped:
        print(f"note: using canonical representative (m, n) = {idx.pair} for ({m}, {n})", file=sys.stderr)
    return idx


def verify_report(idx, grid=2048, tol=1e-9):
    """Everything ``verify`` prints, as a JSON-ready dict."""
    cd, pd, vec = cp.run_pipeline(idx)
    rep = vn.count_zeros(idx, grid=grid, tol=tol)
    b_theta = cp.b_via_theta_constants(idx)
    return {
        "index": {"m": idx.m, "n": idx.n, "flipped": idx.flipped},
        "curve": cd.to_json(),
        "periods": {
            "T": pd.T,
            "tau_g2": pd.tau_g2,
            "tau11": pd.tau11,
            "tau22": pd.tau22,
            "checks": pd.checks,
        },
        "lattice": {
            "vector": list(vec.lattice),
            "residual": vec.checks["lattice_residual"],
            "passed": vec.checks["lattice_residual"] < 1e-8,
        },
        "b_theta_constants": b_theta,
        "b_difference": abs(b_theta - cd.b),
        "vanishing": rep.to_json(),
    }


def exit_code_for(report):
    """Exit status as a function of a verify report alone."""
    return EXIT_MONOPOLE if report["vanishing"]["verdict"] == "monopole" else EXIT_NOT_MONOPOLE


def cmd_verify(args):
    try:
        idx = _canonical(args.m, args.n)
    except sf.InvalidIndexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INDEX
    try:
        report = verify_report(idx, grid=args.grid, tol=args.tol)
    except NUMERIC_ERRORS as exc:
        print(f"numeric failure for {idx.pair}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.format == "csv":
        rep = vn.VanishingReport.from_json(report["vanishing"])
        text = rep.to_csv()
    else:
        text = _json_text(report)
    try:
        _emit(text, args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return exit_code_for(report)


def scan_row(pair, grid=2048, tol=1e-9):
    """One scan row; numeric failures are recorded instead of raised."""
    idx = cp.MonopoleIndex(*pair)
    row = dict.fromkeys(SCAN_COLUMNS, "")
    row.update(m=idx.m, n=idx.n, T_imag=repr(idx.T.imag), conjectured=idx.conjectured_zeros)
    try:
        cd = cp.solve_curve(idx)
        row.update(b=repr(cd.b), chi_cbrt=repr(cd.chi_cbrt))
        rep = vn.count_zeros(idx, grid=grid, tol=tol)
        row.update(
            zero_count=rep.zero_count,
            match=rep.conjecture_match,
            verdict="monopole" if rep.verdict else "not monopole",
        )
    except NUMERIC_ERRORS as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def run_scan(cfg):
    pairs = [idx.pair for idx in cp.admissible_indices(cfg.max_abs)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(scan_row, pairs, [cfg.grid] * len(pairs), [cfg.tol] * len(pairs)))
    else:
        rows = [scan_row(p, cfg.grid, cfg.tol) for p in pairs]
    return rows


def scan_text(rows, fmt):
    if fmt == "csv":
        return _csv_text([SCAN_COLUMNS] + [[row[c] for c in SCAN_COLUMNS] for row in rows])
    return _json_text(rows)


def cmd_scan(args):
    try:
        cfg = ScanConfig(max_abs=args.max_abs, grid=args.grid, tol=args.tol, out=args.out,
                         format=args.format, workers=args.workers)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INDEX
    rows = run_scan(cfg)
    try:
        _emit(scan_text(rows, cfg.format), cfg.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_NUMERIC if any(row["error"] for row in rows) else 0


def cmd_selftest(args):
    results = st.run_selftest(hooks=args.hook or ())
    failed = [r for r in results if not r.passed]
    for r in results:
        status = "ok  " if r.passed else "FAIL"
        print(f"{status} {r.label}  {r.detail}")
    print(f"{len(results) - len(failed)}/{len(results)} invariants hold")
    return EXIT_SELFTEST if failed else 0


def cmd_plot(args):
    try:
        if args.what == "branches":
            rows = plotting.branch_data(args.rmin, args.rmax, args.rsteps, args.smax)
            text = _csv_text([plotting.BRANCH_COLUMNS] + [[repr(r), repr(s), k, int(v)] for r, s, k, v in rows])
            if args.svg:
                plotting.render_branches_svg(rows, args.svg)
        else:
            try:
                idx = _canonical(args.m, args.n)
            except sf.InvalidIndexError as exc:
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_INVALID_INDEX
            data = plotting.profile_data(idx, grid=args.grid)
            text = _csv_text([plotting.PROFILE_COLUMNS] + [[repr(float(v)) for v in row] for row in data])
            if args.svg:
                plotting.render_profile_svg(data, args.svg, title=f"(m, n) = {idx.pair}", which=args.what)
        _emit(text, args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="cyclic-monopole", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--grid", type=int, default=2048, help="lambda samples (default 2048)")
        p.add_argument("--tol", type=float, default=1e-9, help="zero residual tolerance (default 1e-9)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("verify", help="verdict for one index")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="table over all admissible indices")
    p.add_argument("--max-abs", type=int, default=8)
    p.add_argument("--workers", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("selftest", help="run the invariant suites")
    p.add_argument("--hook", action="append", choices=st.HOOKS,
                   help="negative control: break a convention before running")
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("plot", help="profile or branch data as CSV, optional SVG")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("what", choices=("H", "hk", "branches"))
    p.add_argument("out", help="CSV output path")
    p.add_argument("--grid", type=int, default=2048)
    p.add_argument("--rmin", type=float, default=0.25)
    p.add_argument("--rmax", type=float, default=12.0)
    p.add_argument("--rsteps", type=int, default=200)
    p.add_argument("--smax", type=float, default=2.0)
    p.add_argument("--svg", default=None, help="also render an SVG here")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "grid", 2048) < 512:
        print("error: --grid must be at least 512", file=sys.stderr)
        return EXIT_INVALID_INDEX
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
