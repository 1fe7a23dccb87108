"""Renewal-process checks for one threshold.

Under a memoryless overshoot mechanism the normalized overshoot length is
Exp(lambda), the per-cycle overshoot count is Geom(1 - exp(-lambda)), and
the directional-change share of all events converges to the same
probability. The checks below estimate that probability three ways (event
counts, mean overshoot count, mean overshoot length) and test the two
distributional assumptions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .core import Cycles
from .errors import (
    EmptyCycles,
    EmptyLengths,
    MissingFields,
    NoEvents,
    ZeroMean,
)
from .numerics import chi2_sf, kolmogorov_sf
from .sweep import ThresholdSummary

P0 = 1.0 - math.exp(-1.0)

# below this many cycles the p-values of the count tests are left blank
MIN_CYCLES_FOR_TESTS = 2
# below this many overshoot lengths the whole exponential block is blank
MIN_LENGTHS_FOR_FIT = 5
CHI2_MIN_EXPECTED = 5.0


@dataclass(frozen=True)
class DcProbability:
    p1: float
    p2: Optional[float]  # undefined when n_dc == 0
    p_mean: Optional[float]
    se: Optional[float]
    delta_p: Optional[float]
    p0: float = P0


def empirical_dc_probability(n_dc: int, n_os: int) -> DcProbability:
    n = n_dc + n_os
    if n <= 0:
        raise NoEvents("no directional-change or overshoot events")
    p1 = n_dc / (n_dc + n_os)
    if n_dc == 0:
        return DcProbability(p1=p1, p2=None, p_mean=None, se=None, delta_p=None)
    p2 = 1.0 / (1.0 + n_os / n_dc)
    p_mean = 0.5 * (p1 + p2)
    se = math.sqrt(p_mean * (1.0 - p_mean) / n)
    return DcProbability(p1=p1, p2=p2, p_mean=p_mean, se=se, delta_p=p_mean - P0)


class ShareRegime(Enum):
    RENEWAL = "Renewal"
    OVERSHOOT_PERSISTENCE = "OvershootPersistence"
    ANTI_PERSISTENT = "AntiPersistent"


class CountRegime(Enum):
    MEMORYLESS = "Memoryless"
    TRENDING = "Trending"
    CHOPPY = "Choppy"


class RateRegime(Enum):
    SCALE_INVARIANT = "ScaleInvariant"
    PERSISTENCE = "Persistence"
    ANTI_PERSISTENCE = "AntiPersistence"


@dataclass(frozen=True)
class RegimeBands:
    """Interpretation cut-offs.

    A share within [p_low, p_high] reads as memoryless; a rate within
    1 +/- lam_band reads as scale invariant.
    """

    p_low: float = 0.60
    p_high: float = 0.66
    lam_band: float = 0.10


DEFAULT_BANDS = RegimeBands()


def classify_p_mean(p: float, bands: RegimeBands = DEFAULT_BANDS) -> ShareRegime:
    if p < bands.p_low:
        return ShareRegime.OVERSHOOT_PERSISTENCE
    if p > bands.p_high:
        return ShareRegime.ANTI_PERSISTENT
    return ShareRegime.RENEWAL


def classify_p_geom(p: float, bands: RegimeBands = DEFAULT_BANDS) -> CountRegime:
    if p < bands.p_low:
        return CountRegime.TRENDING
    if p > bands.p_high:
        return CountRegime.CHOPPY
    return CountRegime.MEMORYLESS


def classify_lambda(lam: float, bands: RegimeBands = DEFAULT_BANDS) -> RateRegime:
    if lam < 1.0 - bands.lam_band:
        return RateRegime.PERSISTENCE
    if lam > 1.0 + bands.lam_band:
        return RateRegime.ANTI_PERSISTENCE
    return RateRegime.SCALE_INVARIANT


@dataclass(frozen=True)
class GeometricFit:
    p_geom: float
    chi2_p: Optional[float]
    ks_p: Optional[float]
    n_cycles: int
    chi2_stat: Optional[float] = None
    chi2_dof: Optional[int] = None
    ks_stat: Optional[float] = None


def geometric_bins(n: int, p: float) -> list[tuple[int, float]]:
    """Chi-squared bins as ``(first_k, expected)``; the last bin is the tail K >= first_k.

    Single-k bins are kept while both the bin and the tail after it expect at
    least five counts; everything beyond is merged into the tail bin.
    """
    q = 1.0 - p
    bins = []
    k = 0
    tail = float(n)  # expected count of K >= k
    while True:
        e_k = tail * p
        tail_next = tail * q
        if e_k >= CHI2_MIN_EXPECTED and tail_next >= CHI2_MIN_EXPECTED:
            bins.append((k, e_k))
            tail = tail_next
            k += 1
            continue
        bins.append((k, tail))
        return bins


def geometric_test(counts, min_cycles_for_tests: int = MIN_CYCLES_FOR_TESTS) -> GeometricFit:
    """Fit Geom(p) to overshoot counts by p = 1/(1 + mean K) and test it.

    The KS test is run against the fitted discrete CDF with the asymptotic
    continuous-case p-value, which is conservative for discrete data.
    """
    k = np.asarray(counts, dtype=np.int64)
    n = int(k.size)
    if n == 0:
        raise EmptyCycles("no completed cycles")
    k_bar = float(k.mean())
    p = 1.0 / (1.0 + k_bar)
    if k_bar == 0.0 or n < min_cycles_for_tests:
        return GeometricFit(p_geom=p, chi2_p=None, ks_p=None, n_cycles=n)

    observed = np.bincount(k)
    bins = geometric_bins(n, p)
    chi2 = 0.0
    for j, (start, expected) in enumerate(bins):
        if j == len(bins) - 1:
            o = int(observed[start:].sum())
        else:
            o = int(observed[start]) if start < observed.size else 0
        chi2 += (o - expected) ** 2 / expected
    dof = len(bins) - 2
    chi2_p = chi2_sf(chi2, dof) if dof >= 1 else None

    support = np.arange(observed.size)
    emp_cdf = np.cumsum(observed) / n
    model_cdf = 1.0 - (1.0 - p) ** (support + 1)
    d = float(np.max(np.abs(emp_cdf - model_cdf)))
    return GeometricFit(
        p_geom=p,
        chi2_p=chi2_p,
        ks_p=kolmogorov_sf(d, n),
        n_cycles=n,
        chi2_stat=chi2,
        chi2_dof=dof if dof >= 1 else None,
        ks_stat=d,
    )


@dataclass(frozen=True)
class ExponentialFit:
    lambda_hat: float
    ks_p: float
    ci_low: float
    ci_high: float
    p_pred: float
    n_overshoots: int
    ks_stat: float = math.nan
    ks_p_bootstrap: Optional[float] = None


def _ks_exponential(sorted_x: np.ndarray, lam: float) -> float:
    n = sorted_x.size
    cdf = -np.expm1(-lam * sorted_x)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - cdf), np.max(cdf - (i - 1) / n)))


def exponential_test(lengths, bootstrap: int = 0, seed: int = 0) -> ExponentialFit:
    """Fit Exp(lambda) to normalized overshoot lengths by lambda = 1/mean.

    The KS p-value is the plain one-sample value with lambda treated as
    known, as is customary for this diagnostic. With ``bootstrap > 0`` a
    parametric-bootstrap p-value that accounts for the estimated rate is
    added in ``ks_p_bootstrap``.
    """
    x = np.asarray(lengths, dtype=np.float64)
    n = int(x.size)
    if n == 0:
        raise EmptyLengths("no overshoot lengths")
    if np.any(x < 0):
        raise ValueError("overshoot lengths must be non-negative")
    mean = float(x.mean())
    if mean == 0.0:
        raise ZeroMean("all overshoot lengths are zero")
    lam = 1.0 / mean
    d = _ks_exponential(np.sort(x), lam)
    half = 1.96 / math.sqrt(n)

    boot_p = None
    if bootstrap > 0:
        rng = np.random.default_rng(seed)
        exceed = 0
        for _ in range(bootstrap):
            sim = np.sort(rng.exponential(scale=mean, size=n))
            if _ks_exponential(sim, 1.0 / sim.mean()) >= d:
                exceed += 1
        boot_p = (exceed + 1) / (bootstrap + 1)

    return ExponentialFit(
        lambda_hat=lam,
        ks_p=kolmogorov_sf(d, n),
        ci_low=lam * (1.0 - half),
        ci_high=lam * (1.0 + half),
        p_pred=-math.expm1(-lam),
        n_overshoots=n,
        ks_stat=d,
        ks_p_bootstrap=boot_p,
    )


@dataclass(frozen=True)
class DiagnosticsRow:
    """One row of the renewal-diagnostics table; None marks a blank cell."""

    delta: float
    p_mean: Optional[float] = None
    diff: Optional[float] = None
    p_geom: Optional[float] = None
    geo_chi2_p: Optional[float] = None
    geo_ks_p: Optional[float] = None
    lam_hat: Optional[float] = None
    exp_ks_p: Optional[float] = None
    lam_ci_low: Optional[float] = None
    lam_ci_high: Optional[float] = None
    p_pred: Optional[float] = None


def diagnostics_row(
    delta: float,
    summary: ThresholdSummary,
    cycles: Cycles,
    bootstrap: int = 0,
    seed: int = 0,
) -> DiagnosticsRow:
    """Assemble all diagnostics for one threshold, leaving blanks where a
    statistic cannot be computed (no events, no cycles, too few lengths)."""
    vals: dict = {}
    if summary.n_ev > 0:
        prob = empirical_dc_probability(summary.n_dc, summary.n_os)
        if prob.p_mean is not None:
            vals["p_mean"] = prob.p_mean
            vals["diff"] = prob.delta_p
    if len(cycles) > 0:
        geo = geometric_test(cycles.counts)
        vals.update(p_geom=geo.p_geom, geo_chi2_p=geo.chi2_p, geo_ks_p=geo.ks_p)
    if len(cycles) >= MIN_LENGTHS_FOR_FIT and float(np.sum(cycles.lengths)) > 0:
        fit = exponential_test(cycles.lengths, bootstrap=bootstrap, seed=seed)
        vals.update(
            lam_hat=fit.lambda_hat,
            exp_ks_p=fit.ks_p_bootstrap if bootstrap > 0 else fit.ks_p,
            lam_ci_low=fit.ci_low,
            lam_ci_high=fit.ci_high,
            p_pred=fit.p_pred,
        )
    return DiagnosticsRow(delta=float(delta), **vals)


@dataclass(frozen=True)
class ConsistencyReport:
    passed: bool
    max_pairwise_diff: float
    lambda_deviation: float
    tol: float
    tol_lambda: float

    def __bool__(self) -> bool:
        return self.passed


def consistency_check(row: DiagnosticsRow, tol: float = 0.02, tol_lambda: float = 0.10) -> ConsistencyReport:
    """Do the three share estimates agree, and is the fitted rate near one?"""
    needed = ("p_mean", "p_geom", "p_pred", "lam_hat")
    missing = [f for f in needed if getattr(row, f) is None]
    if missing:
        raise MissingFields(missing)
    ps = (row.p_mean, row.p_geom, row.p_pred)
    spread = max(ps) - min(ps)
    lam_dev = abs(row.lam_hat - 1.0)
    return ConsistencyReport(
        passed=spread <= tol and lam_dev <= tol_lambda,
        max_pairwise_diff=spread,
        lambda_deviation=lam_dev,
        tol=tol,
        tol_lambda=tol_lambda,
    )


def row_values(row: DiagnosticsRow) -> list:
    return [getattr(row, f.name) for f in fields(row)]


def run_diagnostics(summaries: Sequence[ThresholdSummary], cycles: Sequence[Cycles], **kw) -> list[DiagnosticsRow]:
    return [diagnostics_row(s.delta, s, c, **kw) for s, c in zip(summaries, cycles)]
