"""Scaling-zone detection and log-log power-law regression."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .errors import NoZoneFound, NonPositiveFrequency, TooFewPoints
from .numerics import t_sf_two_sided


class ZoneLabel(Enum):
    MICROSTRUCTURE_NOISE = "MicrostructureNoise"
    SCALING = "Scaling"
    DATA_SCARCITY = "DataScarcity"


@dataclass(frozen=True)
class ScalingConfig:
    target_pct: float = 61.21
    tolerance_pct: float = 2.5
    std_ddof: int = 1  # sample standard deviation; 0 gives the population form

    def __post_init__(self):
        if not 0 < self.target_pct < 100:
            raise ValueError("target_pct must lie in (0, 100)")
        if not self.tolerance_pct > 0:
            raise ValueError("tolerance_pct must be positive")


@dataclass(frozen=True)
class ScalingZone:
    start: int
    stop: int  # inclusive
    min_delta: float
    max_delta: float
    mean_dc_pct: float
    std_dc_pct: float
    labels: tuple[ZoneLabel, ...]

    @property
    def n_deltas(self) -> int:
        return self.stop - self.start + 1

    @property
    def index_range(self) -> range:
        return range(self.start, self.stop + 1)


def find_zone(deltas: Sequence[float], dc_pcts: Sequence[Optional[float]], cfg: ScalingConfig = ScalingConfig()) -> ScalingZone:
    """Locate the scaling zone on a dc-share curve ordered by increasing delta.

    The zone opens at the first point whose share reaches ``target_pct`` and
    runs over the unbroken stretch of points that stay within
    ``target_pct +/- tolerance_pct``. Blank shares (None) never qualify.
    """
    n = len(dc_pcts)
    if len(deltas) != n:
        raise ValueError("deltas and dc_pcts differ in length")
    lo = cfg.target_pct - cfg.tolerance_pct
    hi = cfg.target_pct + cfg.tolerance_pct

    def ok(v):
        return v is not None and not math.isnan(v) and lo <= v <= hi

    start = next((i for i, v in enumerate(dc_pcts) if v is not None and v >= cfg.target_pct), None)
    if start is None or not ok(dc_pcts[start]):
        reason = "no point reaches" if start is None else "first crossing lies above the band around"
        raise NoZoneFound(
            f"{reason} target {cfg.target_pct}%",
            labels=[ZoneLabel.MICROSTRUCTURE_NOISE] * n,
        )
    stop = start
    while stop + 1 < n and ok(dc_pcts[stop + 1]):
        stop += 1
    vals = np.array(dc_pcts[start:stop + 1], dtype=float)
    std = float(vals.std(ddof=cfg.std_ddof)) if vals.size > cfg.std_ddof else 0.0
    labels = (
        [ZoneLabel.MICROSTRUCTURE_NOISE] * start
        + [ZoneLabel.SCALING] * (stop - start + 1)
        + [ZoneLabel.DATA_SCARCITY] * (n - stop - 1)
    )
    return ScalingZone(
        start=start,
        stop=stop,
        min_delta=float(deltas[start]),
        max_delta=float(deltas[stop]),
        mean_dc_pct=float(vals.mean()),
        std_dc_pct=std,
        labels=tuple(labels),
    )


def detect_zone(rows, cfg: ScalingConfig = ScalingConfig()) -> ScalingZone:
    """:func:`find_zone` over summary rows (anything with ``delta`` and ``dc_pct``)."""
    rows = list(rows)
    return find_zone([r.delta for r in rows], [r.dc_pct for r in rows], cfg)


@dataclass(frozen=True)
class RegressionResult:
    beta: float
    intercept: float
    r_squared: float
    p_value: Optional[float]
    n_points: int
    stderr: Optional[float] = None


def fit_power_law(deltas, freqs) -> RegressionResult:
    """OLS of log10(freq) on log10(delta); ``beta`` is the fitted slope.

    The slope p-value is the two-sided t-test with n - 2 degrees of freedom
    (zero for a perfect fit).
    """
    x = np.asarray(deltas, dtype=float)
    y = np.asarray(freqs, dtype=float)
    if x.shape != y.shape:
        raise ValueError("deltas and freqs differ in length")
    n = int(x.size)
    if n < 3:
        raise TooFewPoints(f"need at least 3 points, got {n}")
    if np.any(~(y > 0)) or np.any(~(x > 0)):
        raise NonPositiveFrequency("power-law fit needs positive deltas and frequencies")
    lx = np.log10(x)
    ly = np.log10(y)
    mx, my = lx.mean(), ly.mean()
    sxx = float(np.sum((lx - mx) ** 2))
    if sxx == 0.0:
        raise TooFewPoints("all deltas are equal")
    sxy = float(np.sum((lx - mx) * (ly - my)))
    beta = sxy / sxx
    intercept = float(my - beta * mx)
    resid = ly - (intercept + beta * lx)
    ss_res = float(np.sum(resid ** 2))
    ss_tot = float(np.sum((ly - my) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    r2 = min(1.0, max(0.0, r2))
    dof = n - 2
    stderr = math.sqrt(ss_res / dof / sxx)
    if stderr == 0.0:
        p = 0.0
    else:
        p = t_sf_two_sided(beta / stderr, dof)
    return RegressionResult(beta=beta, intercept=intercept, r_squared=r2, p_value=p, n_points=n, stderr=stderr)


EVENT_CLASSES = ("tot", "dc", "os")


@dataclass(frozen=True)
class ZoneReport:
    zone: ScalingZone
    fits: dict  # event class -> RegressionResult (or None when unfittable)

    def zone_row(self) -> list:
        z = self.zone
        return [z.min_delta, z.max_delta, z.n_deltas, z.mean_dc_pct, z.std_dc_pct]

    def regression_rows(self) -> list[list]:
        out = []
        for cls in EVENT_CLASSES:
            r = self.fits.get(cls)
            if r is None:
                out.append([cls, None, None, None, self.zone.n_deltas])
            else:
                out.append([cls, r.beta, r.r_squared, r.p_value, r.n_points])
        return out


def zone_report(zone: ScalingZone, fits: dict) -> ZoneReport:
    return ZoneReport(zone=zone, fits=dict(fits))


def fit_zone(zone: ScalingZone, summaries) -> dict:
    """Power-law fits of total, Dc and Os frequencies over the zone rows."""
    rows = [summaries[i] for i in zone.index_range]
    deltas = [r.delta for r in rows]
    fits = {}
    for cls, attr in zip(EVENT_CLASSES, ("f_ev", "f_dc", "f_os")):
        freqs = [getattr(r, attr) for r in rows]
        try:
            fits[cls] = fit_power_law(deltas, freqs)
        except (TooFewPoints, NonPositiveFrequency):
            fits[cls] = None
    return fits
