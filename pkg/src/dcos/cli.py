"""Command-line interface.

``analyze`` runs everything; ``sweep``, ``diagnose`` and ``zone`` run one
stage each from the previous stage's files; ``simulate`` writes synthetic
inputs.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import tables
from .core import extract_events
from .diagnostics import run_diagnostics
from .errors import DcosError, NoZoneFound
from .ingest import ColumnFormat, load_ticks, to_log_prices, write_ticks
from .pipeline import analyze
from .scaling import ScalingConfig, detect_zone, fit_zone, zone_report
from .sweep import make_grid, run_sweep
from .synth import GbmParams, RenewalStreamParams, generate_gbm, generate_renewal_lengths

log = logging.getLogger("dcos")


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="delimited tick file with a header row")
    p.add_argument("--timestamp-col", default="timestamp")
    p.add_argument("--price-col", default="price")
    p.add_argument("--delimiter", default=",")


def _add_grid(p: argparse.ArgumentParser) -> None:
    p.add_argument("--delta-min", type=float, default=1e-5)
    p.add_argument("--delta-max", type=float, default=1.0)
    p.add_argument("--n-deltas", type=int, default=50)
    p.add_argument("--jobs", type=int, default=1, help="worker threads for the threshold sweep")


def _add_zone(p: argparse.ArgumentParser) -> None:
    p.add_argument("--target-pct", type=float, default=61.21)
    p.add_argument("--tolerance-pct", type=float, default=2.5)


def _add_out(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--table-fidelity", action="store_true", help="3-digit scientific thresholds, rounded shares, <0.0001 p-values, blank empty cells")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dcos", description="Directional-change event statistics across thresholds.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full pipeline: summary, diagnostics, zone, regression, plot data")
    _add_input(p)
    _add_grid(p)
    _add_zone(p)
    _add_out(p)
    p.add_argument("--seed", type=int, default=0, help="seed for bootstrap p-values")
    p.add_argument("--bootstrap", type=int, default=0, help="parametric-bootstrap resamples for the exponential KS test")
    p.add_argument("--dump-cycles", action="store_true", help="also write cycles.csv")
    p.add_argument("--dump-events", action="store_true", help="also write events.csv (large)")

    p = sub.add_parser("sweep", help="event counts per threshold -> summary.csv, cycles.csv")
    _add_input(p)
    _add_grid(p)
    _add_out(p)

    p = sub.add_parser("diagnose", help="summary.csv + cycles.csv -> diagnostics.csv")
    p.add_argument("--dir", required=True, help="directory holding the sweep output")
    p.add_argument("--out", help="output directory (default: --dir)")
    p.add_argument("--table-fidelity", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bootstrap", type=int, default=0)

    p = sub.add_parser("zone", help="summary.csv -> zone.csv, regression.csv, plotdata.csv")
    p.add_argument("--dir", required=True)
    p.add_argument("--out")
    p.add_argument("--table-fidelity", action="store_true")
    _add_zone(p)

    p = sub.add_parser("simulate", help="write synthetic data")
    sim = p.add_subparsers(dest="kind", required=True)
    g = sim.add_parser("gbm", help="GBM midprice path as a tick file")
    g.add_argument("--s0", type=float, default=100.0)
    g.add_argument("--mu", type=float, default=0.0)
    g.add_argument("--sigma", type=float, default=1e-4)
    g.add_argument("--steps", type=int, default=1000)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, help="output CSV path")
    r = sim.add_parser("renewal", help="exponential overshoot lengths and their floor counts")
    r.add_argument("--lambda", dest="lam", type=float, default=1.0)
    r.add_argument("--n", type=int, default=100_000)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out", required=True)
    return parser


def _load(args):
    fmt = ColumnFormat(timestamp=args.timestamp_col, price=args.price_col, delimiter=args.delimiter)
    return load_ticks(args.input, fmt)


def _verify(written: dict) -> None:
    """Parse every written file back; raise if a header or row count is off."""
    for path, (header, n_rows) in written.items():
        rows = tables.read_csv(path, header)
        if len(rows) != n_rows:
            raise DcosError(f"{path}: wrote {n_rows} rows, read back {len(rows)}")


def _zone_outputs(out, summaries, cfg, fidelity, written):
    try:
        zone = detect_zone(summaries, cfg)
    except NoZoneFound as exc:
        log.warning("no scaling zone: %s", exc)
        zone_row, reg_rows = None, []
    else:
        rep = zone_report(zone, fit_zone(zone, summaries))
        zone_row, reg_rows = rep.zone_row(), rep.regression_rows()
        log.info("scaling zone %.4g..%.4g (%d thresholds)", zone.min_delta, zone.max_delta, zone.n_deltas)
    p = os.path.join(out, "zone.csv")
    written[p] = (tables.ZONE_HEADER, tables.write_zone(p, zone_row, fidelity))
    p = os.path.join(out, "regression.csv")
    written[p] = (tables.REGRESSION_HEADER, tables.write_regression(p, reg_rows, fidelity))


def cmd_analyze(args) -> int:
    series = _load(args)
    grid = make_grid(args.delta_min, args.delta_max, args.n_deltas)
    cfg = ScalingConfig(args.target_pct, args.tolerance_pct)
    res = analyze(series, grid, cfg, jobs=args.jobs, bootstrap=args.bootstrap, seed=args.seed)
    os.makedirs(args.out, exist_ok=True)
    fid = args.table_fidelity
    written = {}
    p = os.path.join(args.out, "summary.csv")
    written[p] = (tables.SUMMARY_HEADER, tables.write_summary(p, res.summaries, fid))
    p = os.path.join(args.out, "diagnostics.csv")
    written[p] = (tables.DIAGNOSTICS_HEADER, tables.write_diagnostics(p, res.diagnostics, fid))
    if res.zone is None:
        log.warning("no scaling zone: %s", res.no_zone_reason)
        zone_row, reg_rows = None, []
    else:
        zone_row, reg_rows = res.report.zone_row(), res.report.regression_rows()
    p = os.path.join(args.out, "zone.csv")
    written[p] = (tables.ZONE_HEADER, tables.write_zone(p, zone_row, fid))
    p = os.path.join(args.out, "regression.csv")
    written[p] = (tables.REGRESSION_HEADER, tables.write_regression(p, reg_rows, fid))
    p = os.path.join(args.out, "plotdata.csv")
    written[p] = (tables.PLOTDATA_HEADER, tables.write_plotdata(p, res.summaries, fid))
    if args.dump_cycles:
        p = os.path.join(args.out, "cycles.csv")
        written[p] = (tables.CYCLES_HEADER, tables.write_cycles(p, grid.deltas, res.cycles))
    if args.dump_events:
        logp = to_log_prices(series)
        logs = [extract_events(logp, d)[0] for d in grid.deltas]
        p = os.path.join(args.out, "events.csv")
        written[p] = (tables.EVENTS_HEADER, tables.write_events(p, grid.deltas, logs))
    _verify(written)
    return 0


def cmd_sweep(args) -> int:
    series = _load(args)
    grid = make_grid(args.delta_min, args.delta_max, args.n_deltas)
    res = run_sweep(series, grid, jobs=args.jobs)
    os.makedirs(args.out, exist_ok=True)
    written = {}
    p = os.path.join(args.out, "summary.csv")
    written[p] = (tables.SUMMARY_HEADER, tables.write_summary(p, res.summaries, args.table_fidelity))
    p = os.path.join(args.out, "cycles.csv")
    written[p] = (tables.CYCLES_HEADER, tables.write_cycles(p, grid.deltas, res.cycles))
    _verify(written)
    return 0


def cmd_diagnose(args) -> int:
    out = args.out or args.dir
    summaries = tables.read_summary(os.path.join(args.dir, "summary.csv"))
    cycles = tables.read_cycles(os.path.join(args.dir, "cycles.csv"), len(summaries))
    rows = run_diagnostics(summaries, cycles, bootstrap=args.bootstrap, seed=args.seed)
    os.makedirs(out, exist_ok=True)
    p = os.path.join(out, "diagnostics.csv")
    _verify({p: (tables.DIAGNOSTICS_HEADER, tables.write_diagnostics(p, rows, args.table_fidelity))})
    return 0


def cmd_zone(args) -> int:
    out = args.out or args.dir
    summaries = tables.read_summary(os.path.join(args.dir, "summary.csv"))
    os.makedirs(out, exist_ok=True)
    written = {}
    _zone_outputs(out, summaries, ScalingConfig(args.target_pct, args.tolerance_pct), args.table_fidelity, written)
    p = os.path.join(out, "plotdata.csv")
    written[p] = (tables.PLOTDATA_HEADER, tables.write_plotdata(p, summaries, args.table_fidelity))
    _verify(written)
    return 0


def cmd_simulate(args) -> int:
    parent = os.path.dirname(os.path.abspath(args.out))
    os.makedirs(parent, exist_ok=True)
    if args.kind == "gbm":
        series = generate_gbm(GbmParams(args.s0, args.mu, args.sigma, args.steps, args.seed))
        write_ticks(args.out, series)
        return 0
    sample = generate_renewal_lengths(RenewalStreamParams(args.lam, args.n, args.seed))
    rows = ([repr(x), str(k)] for x, k in zip(sample.lengths.tolist(), sample.counts.tolist()))
    tables.write_csv(args.out, ["length", "count"], rows)
    return 0


COMMANDS = {
    "analyze": cmd_analyze,
    "sweep": cmd_sweep,
    "diagnose": cmd_diagnose,
    "zone": cmd_zone,
    "simulate": cmd_simulate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename or exc}", file=sys.stderr)
    except (DcosError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
