"""Report file schemas, formatting, and readers for stage-by-stage runs.

Two renderings exist. The default writes every float with ``repr`` so files
re-load exactly. Table-fidelity mode is the compact report layout: 3-digit
scientific thresholds and frequencies, 2-decimal shares and probabilities,
``<0.0001`` for tiny p-values, and blanks for zero or undefined cells.
"""

from __future__ import annotations

import csv
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import Cycles, EventLog, Kind
from .diagnostics import DiagnosticsRow
from .sweep import ThresholdSummary

SUMMARY_HEADER = ["delta", "nDc", "nOs", "nEv", "fDc", "fDc_se", "fOs", "fOs_se", "fEv", "fEv_se", "dcPct", "seDcPct"]
DIAGNOSTICS_HEADER = [
    "delta", "pMean", "diff", "pGeom", "geoChi2p", "geoKSp",
    "lamHat", "expKSp", "lamCiLow", "lamCiHigh", "pPred",
]
ZONE_HEADER = ["min_delta", "max_delta", "n_deltas", "mean_dc_pct", "std_dc_pct"]
REGRESSION_HEADER = ["event_class", "beta", "r_squared", "p_value", "n_points"]
PLOTDATA_HEADER = ["delta", "fDc", "fOs", "fEv", "dcPct"]
CYCLES_HEADER = ["grid_index", "delta", "overshoot_count", "overshoot_length_norm"]
EVENTS_HEADER = ["delta", "kind", "direction", "tick_index", "log_price", "overshoot_length_norm"]

P_VALUE_FLOOR = 1e-4


def _full(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _sci(v) -> str:
    return "" if v is None else f"{v:.3e}"


def _fix2(v) -> str:
    return "" if v is None else f"{v:.2f}"


def _pval(v) -> str:
    if v is None:
        return ""
    return "<0.0001" if v < P_VALUE_FLOOR else f"{v:.2f}"


def summary_cells(s: ThresholdSummary, fidelity: bool = False) -> list[str]:
    if not fidelity:
        return [
            _full(s.delta), str(s.n_dc), str(s.n_os), str(s.n_ev),
            _full(s.f_dc), _full(s.f_dc_se), _full(s.f_os), _full(s.f_os_se),
            _full(s.f_ev), _full(s.f_ev_se), _full(s.dc_pct), _full(s.dc_pct_se),
        ]

    def freq(count, f, se):
        return ("", "") if count == 0 else (_sci(f), _sci(se))

    dc = freq(s.n_dc, s.f_dc, s.f_dc_se)
    os_ = freq(s.n_os, s.f_os, s.f_os_se)
    ev = freq(s.n_ev, s.f_ev, s.f_ev_se)
    pct = s.dc_pct if s.n_dc > 0 else None
    pct_se = s.dc_pct_se if pct is not None and s.dc_pct_se else None
    return [_sci(s.delta), str(s.n_dc), str(s.n_os), str(s.n_ev), *dc, *os_, *ev, _fix2(pct), _fix2(pct_se)]


def diagnostics_cells(r: DiagnosticsRow, fidelity: bool = False) -> list[str]:
    vals = [r.p_mean, r.diff, r.p_geom, r.geo_chi2_p, r.geo_ks_p, r.lam_hat, r.exp_ks_p, r.lam_ci_low, r.lam_ci_high, r.p_pred]
    if not fidelity:
        return [_full(r.delta)] + [_full(v) for v in vals]
    kinds = [_fix2, _fix2, _fix2, _pval, _pval, _fix2, _pval, _fix2, _fix2, _fix2]
    return [_sci(r.delta)] + [fmt(v) for fmt, v in zip(kinds, vals)]


def plotdata_cells(s: ThresholdSummary, fidelity: bool = False) -> list[str]:
    cells = summary_cells(s, fidelity)
    return [cells[0], cells[4], cells[6], cells[8], cells[10]]


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence[str]]) -> int:
    n = 0
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(row)
            n += 1
    return n


def read_csv(path, header: Sequence[str]) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != list(header):
            raise ValueError(f"{path}: unexpected header {reader.fieldnames!r}")
        return list(reader)


def write_summary(path, rows: Sequence[ThresholdSummary], fidelity: bool = False) -> int:
    return write_csv(path, SUMMARY_HEADER, (summary_cells(s, fidelity) for s in rows))


def write_diagnostics(path, rows: Sequence[DiagnosticsRow], fidelity: bool = False) -> int:
    return write_csv(path, DIAGNOSTICS_HEADER, (diagnostics_cells(r, fidelity) for r in rows))


def write_plotdata(path, rows: Sequence[ThresholdSummary], fidelity: bool = False) -> int:
    return write_csv(path, PLOTDATA_HEADER, (plotdata_cells(s, fidelity) for s in rows))


def write_zone(path, zone_row: Optional[Sequence], fidelity: bool = False) -> int:
    if zone_row is None:
        return write_csv(path, ZONE_HEADER, [])
    lo, hi, n, mean, std = zone_row
    if fidelity:
        cells = [f"{lo:.4f}", f"{hi:.4f}", str(n), f"{mean:.2f}", f"{std:.2f}"]
    else:
        cells = [_full(lo), _full(hi), str(n), _full(mean), _full(std)]
    return write_csv(path, ZONE_HEADER, [cells])


def write_regression(path, rows: Sequence[Sequence], fidelity: bool = False) -> int:
    out = []
    for cls, beta, r2, p, n in rows:
        if fidelity:
            out.append([cls, _fix2(beta), _fix2(r2), "" if p is None else ("<0.001" if p < 1e-3 else f"{p:.3f}"), str(n)])
        else:
            out.append([cls, _full(beta), _full(r2), _full(p), str(n)])
    return write_csv(path, REGRESSION_HEADER, out)


def write_cycles(path, deltas: Sequence[float], cycles: Sequence[Cycles]) -> int:
    def rows():
        for i, (d, c) in enumerate(zip(deltas, cycles)):
            dd = _full(d)
            for k, x in zip(c.counts.tolist(), c.lengths.tolist()):
                yield [str(i), dd, str(k), repr(x)]

    return write_csv(path, CYCLES_HEADER, rows())


def write_events(path, deltas: Sequence[float], logs: Sequence[EventLog]) -> int:
    def rows():
        for d, log in zip(deltas, logs):
            dd = _full(d)
            for kind, direction, idx, level, x in zip(
                log.kind.tolist(), log.direction.tolist(), log.tick_index.tolist(),
                log.level.tolist(), log.length_norm.tolist(),
            ):
                yield [
                    dd,
                    "Dc" if kind == Kind.DC else "Os",
                    "Up" if direction > 0 else "Down",
                    str(idx),
                    repr(level),
                    "" if x != x else repr(x),
                ]

    return write_csv(path, EVENTS_HEADER, rows())


def _opt(cell: str) -> Optional[float]:
    if cell == "":
        return None
    if cell.startswith("<"):
        return float(cell[1:])
    return float(cell)


def read_summary(path) -> list[ThresholdSummary]:
    """Re-load ``summary.csv`` (either rendering)."""
    out = []
    for rec in read_csv(path, SUMMARY_HEADER):
        n_dc, n_os = int(rec["nDc"]), int(rec["nOs"])
        f_ev = _opt(rec["fEv"])
        n_ticks = int(round((n_dc + n_os) / f_ev)) if f_ev else 0
        out.append(
            ThresholdSummary(
                delta=float(rec["delta"]),
                n_ticks=n_ticks,
                n_dc=n_dc,
                n_os=n_os,
                f_dc=_opt(rec["fDc"]) or 0.0,
                f_dc_se=_opt(rec["fDc_se"]) or 0.0,
                f_os=_opt(rec["fOs"]) or 0.0,
                f_os_se=_opt(rec["fOs_se"]) or 0.0,
                f_ev=f_ev or 0.0,
                f_ev_se=_opt(rec["fEv_se"]) or 0.0,
                dc_pct=_opt(rec["dcPct"]),
                dc_pct_se=_opt(rec["seDcPct"]),
            )
        )
    return out


def read_cycles(path, n_deltas: int) -> list[Cycles]:
    counts: list[list[int]] = [[] for _ in range(n_deltas)]
    lengths: list[list[float]] = [[] for _ in range(n_deltas)]
    for rec in read_csv(path, CYCLES_HEADER):
        i = int(rec["grid_index"])
        counts[i].append(int(rec["overshoot_count"]))
        lengths[i].append(float(rec["overshoot_length_norm"]))
    return [Cycles(np.array(k, dtype=np.int64), np.array(x, dtype=np.float64)) for k, x in zip(counts, lengths)]


def read_diagnostics(path) -> list[DiagnosticsRow]:
    out = []
    for rec in read_csv(path, DIAGNOSTICS_HEADER):
        vals = [_opt(rec[h]) for h in DIAGNOSTICS_HEADER[1:]]
        out.append(DiagnosticsRow(float(rec["delta"]), *vals))
    return out
