"""End-to-end analysis of one tick series, independent of any file layout."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .diagnostics import DiagnosticsRow, diagnostics_row
from .errors import NoZoneFound
from .ingest import TickSeries
from .scaling import ScalingConfig, ScalingZone, ZoneReport, detect_zone, fit_zone, zone_report
from .sweep import ThresholdGrid, run_sweep


@dataclass
class Analysis:
    grid: ThresholdGrid
    summaries: list
    cycles: list
    diagnostics: list[DiagnosticsRow]
    zone: Optional[ScalingZone]
    report: Optional[ZoneReport]
    no_zone_reason: Optional[str] = None


def analyze(
    series: TickSeries,
    grid: ThresholdGrid,
    scaling: ScalingConfig = ScalingConfig(),
    jobs: int = 1,
    bootstrap: int = 0,
    seed: int = 0,
) -> Analysis:
    """Sweep, per-threshold diagnostics (in the sweep workers), zone and fits."""

    def diag(delta, summary, cycles):
        return diagnostics_row(delta, summary, cycles, bootstrap=bootstrap, seed=seed)

    result = run_sweep(series, grid, jobs=jobs, per_delta=diag)
    zone = report = None
    reason = None
    try:
        zone = detect_zone(result.summaries, scaling)
    except NoZoneFound as exc:
        reason = str(exc)
    else:
        report = zone_report(zone, fit_zone(zone, result.summaries))
    return Analysis(
        grid=grid,
        summaries=result.summaries,
        cycles=result.cycles,
        diagnostics=result.extras,
        zone=zone,
        report=report,
        no_zone_reason=reason,
    )
