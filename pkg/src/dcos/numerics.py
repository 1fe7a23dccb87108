"""Survival functions behind the goodness-of-fit and regression p-values.

Only three are needed: the chi-squared upper tail (regularized incomplete
gamma), the asymptotic Kolmogorov distribution, and the two-sided Student t
tail (regularized incomplete beta). All are plain-float, stateless, and
reentrant.
"""

from __future__ import annotations

import math

from .errors import InvalidDof

_EPS = 1e-15
_TINY = 1e-300
_MAX_ITER = 10_000


def _check_dof(dof) -> None:
    if int(dof) != dof or dof < 1:
        raise InvalidDof(f"degrees of freedom must be a positive integer, got {dof!r}")


def _clip01(v: float) -> float:
    return min(1.0, max(0.0, v))


def _gamma_series(a: float, x: float) -> float:
    """Lower regularized incomplete gamma P(a, x) by power series."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_cf(a: float, x: float) -> float:
    """Upper regularized incomplete gamma Q(a, x) by modified Lentz."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def gammaincc(a: float, x: float) -> float:
    """Upper regularized incomplete gamma function Q(a, x)."""
    if a <= 0:
        raise ValueError("a must be positive")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return _clip01(1.0 - _gamma_series(a, x))
    return _clip01(_gamma_cf(a, x))


def chi2_sf(x: float, dof: int) -> float:
    """Upper tail of the chi-squared distribution with ``dof`` degrees of freedom."""
    _check_dof(dof)
    if x < 0:
        raise ValueError("chi-squared statistic must be non-negative")
    return gammaincc(dof / 2.0, x / 2.0)


def _beta_cf(a: float, b: float, x: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    # continued fraction converges fast only below the mean; reflect otherwise
    if x < (a + 1.0) / (a + b + 2.0):
        return _clip01(front * _beta_cf(a, b, x) / a)
    return _clip01(1.0 - front * _beta_cf(b, a, 1.0 - x) / b)


def t_sf_two_sided(t: float, dof: int) -> float:
    """P(|T| >= |t|) for Student's t with ``dof`` degrees of freedom."""
    _check_dof(dof)
    if math.isnan(t):
        raise ValueError("t is NaN")
    if math.isinf(t):
        return 0.0
    if t == 0:
        return 1.0
    x = dof / (dof + t * t)
    return betainc(dof / 2.0, 0.5, x)


def kolmogorov_survival(lam: float) -> float:
    """Survival function of the limiting Kolmogorov distribution at ``lam``."""
    if lam <= 0:
        return 1.0
    if lam < 1.0:
        # alternating series converges too slowly here; use the theta-function
        # form of the CDF instead
        s = 0.0
        k = 1
        c = math.pi * math.pi / (8.0 * lam * lam)
        while True:
            term = math.exp(-(2 * k - 1) ** 2 * c)
            s += term
            if term < 1e-17:
                break
            k += 1
        return _clip01(1.0 - math.sqrt(2.0 * math.pi) / lam * s)
    total = 0.0
    k = 1
    while True:
        term = math.exp(-2.0 * k * k * lam * lam)
        total += term if k % 2 else -term
        if term < 1e-12:
            break
        k += 1
    return _clip01(2.0 * total)


def kolmogorov_sf(d: float, n: int) -> float:
    """Asymptotic p-value of a one-sample KS distance ``d`` from ``n`` points."""
    if d < 0:
        raise ValueError("KS distance must be non-negative")
    if n < 1:
        raise ValueError("sample size must be positive")
    return kolmogorov_survival(math.sqrt(n) * d)
