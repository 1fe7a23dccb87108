"""Directional-change / overshoot event statistics over a threshold grid."""

from __future__ import annotations

from .core import Counts, CycleRecord, Cycles, DcosEvent, Direction, EventLog, Kind, count_events, extract_counts, extract_events
from .diagnostics import (
    DcProbability,
    DiagnosticsRow,
    ExponentialFit,
    GeometricFit,
    RegimeBands,
    consistency_check,
    diagnostics_row,
    empirical_dc_probability,
    exponential_test,
    geometric_test,
    run_diagnostics,
)
from .errors import DcosError, IngestError, NoZoneFound
from .ingest import ColumnFormat, Tick, TickSeries, load_ticks, to_log_prices, write_ticks
from .pipeline import Analysis, analyze
from .scaling import RegressionResult, ScalingConfig, ScalingZone, detect_zone, find_zone, fit_power_law, fit_zone
from .sweep import ThresholdGrid, ThresholdSummary, make_grid, run_sweep, summarize_threshold
from .synth import GbmParams, RenewalStreamParams, generate_gbm, generate_renewal_lengths

__version__ = "0.1.0"
