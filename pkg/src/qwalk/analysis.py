"""Scaling exponents, logarithmic fits and localization checks on moment series."""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.stats import spearmanr

from .errors import InsufficientDataError
from .evolution import MomentSeries

MIN_FIT_POINTS = 10
MIN_LOCALIZATION_POINTS = 50
RANGE_THRESHOLD = 0.5
RANK_THRESHOLD = 0.3
# log-log slope below which a monotone drift is read as saturation, not growth
DRIFT_EXPONENT_THRESHOLD = 0.05
DEFAULT_FIT_FLOOR = 1000
DEFAULT_SMOOTH_WINDOW = 101


class FitResult(NamedTuple):
    exponent: float
    prefactor: float
    r_squared: float
    window: tuple[int, int]

    def csv_row(self, alpha) -> list[str]:
        """Row for the ``alpha,exponent,prefactor,r_squared,n_lo,n_hi`` table."""
        return [repr(float(v)) for v in (alpha, self.exponent, self.prefactor, self.r_squared)] + [
            str(self.window[0]), str(self.window[1])]


FIT_CSV_HEADER = ["alpha", "exponent", "prefactor", "r_squared", "n_lo", "n_hi"]


class Localization(NamedTuple):
    is_localized: bool
    sigma_mean: float
    sigma_range: float


class TrendStatistics(NamedTuple):
    relative_range: float
    rank_correlation: float
    drift_exponent: float


def default_fit_window(n_max: int, n0: int = 1) -> tuple[int, int]:
    return max(DEFAULT_FIT_FLOOR, 10 * n0), n_max


def _ols(x, y):
    """Slope, intercept and R^2 of ``y ~ x`` using centred sums."""
    xm = x.mean()
    ym = y.mean()
    dx = x - xm
    dy = y - ym
    sxx = float(np.dot(dx, dx))
    if sxx == 0.0:
        raise InsufficientDataError("fit needs at least two distinct abscissae")
    slope = float(np.dot(dx, dy)) / sxx
    intercept = float(ym - slope * xm)
    resid = dy - slope * dx
    ss_tot = float(np.dot(dy, dy))
    ss_res = float(np.dot(resid, resid))
    r2 = 1.0 if ss_tot == 0.0 else max(0.0, 1.0 - ss_res / ss_tot)
    return slope, intercept, r2


def _window(series: MomentSeries, n_lo, n_hi):
    if not n_lo < n_hi:
        raise ValueError(f"fit window needs n_lo < n_hi, got ({n_lo}, {n_hi})")
    mask = (series.n >= n_lo) & (series.n <= n_hi)
    return series.n[mask].astype(np.float64), series.sigma[mask]


def fit_power_law(series: MomentSeries, n_lo: int, n_hi: int) -> FitResult:
    """Least squares of ``log sigma`` on ``log n`` over ``[n_lo, n_hi]``.

    Records with ``sigma <= 0`` are dropped before fitting.
    """
    n, sigma = _window(series, n_lo, n_hi)
    keep = sigma > 0
    if not keep.any():
        raise InsufficientDataError(f"no positive sigma in [{n_lo}, {n_hi}]")
    if keep.sum() < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"{int(keep.sum())} usable records in [{n_lo}, {n_hi}], need {MIN_FIT_POINTS}"
        )
    slope, intercept, r2 = _ols(np.log(n[keep]), np.log(sigma[keep]))
    return FitResult(slope, math.exp(intercept), r2, (int(n_lo), int(n_hi)))


def fit_logarithmic(series: MomentSeries, n_lo: int, n_hi: int) -> FitResult:
    """Least squares of ``sigma`` on ``ln n``.

    ``exponent`` holds the slope and ``prefactor`` the intercept.
    """
    n, sigma = _window(series, n_lo, n_hi)
    if n.size < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"{n.size} records in [{n_lo}, {n_hi}], need {MIN_FIT_POINTS}"
        )
    slope, intercept, r2 = _ols(np.log(n), sigma)
    return FitResult(slope, intercept, r2, (int(n_lo), int(n_hi)))


def trend_statistics(series: MomentSeries, n_lo: int) -> TrendStatistics:
    """Relative range, Spearman correlation with ``n`` and log-log drift of sigma."""
    tail = series.between(n_lo)
    if len(tail) < MIN_LOCALIZATION_POINTS:
        raise InsufficientDataError(
            f"{len(tail)} records at n >= {n_lo}, need {MIN_LOCALIZATION_POINTS}"
        )
    sigma = tail.sigma
    mean = float(sigma.mean())
    spread = float(sigma.max() - sigma.min())
    if mean > 0:
        rel = spread / mean
    else:
        rel = 0.0 if spread == 0 else math.inf
    if spread == 0:
        rho = 0.0
    else:
        rho = float(spearmanr(tail.n, sigma).statistic)
        if math.isnan(rho):
            rho = 0.0
    pos = sigma > 0
    drift = 0.0
    if pos.sum() >= 2 and spread > 0:
        drift, _, _ = _ols(np.log(tail.n[pos].astype(np.float64)), np.log(sigma[pos]))
    return TrendStatistics(rel, rho, float(drift))


def detect_localization(series: MomentSeries, n_lo: int,
                        range_threshold: float = RANGE_THRESHOLD,
                        rank_threshold: float = RANK_THRESHOLD,
                        drift_threshold: float = DRIFT_EXPONENT_THRESHOLD) -> Localization:
    """Decide whether sigma has saturated for ``n >= n_lo``.

    Localized means the relative range ``(max - min)/mean`` stays below
    ``range_threshold`` and there is no growing trend. A trend needs both a
    rank correlation of at least ``rank_threshold`` in magnitude and a
    log-log slope of at least ``drift_threshold``, so a sigma that creeps
    monotonically towards its limit still counts as localized.
    """
    stats = trend_statistics(series, n_lo)
    sigma = series.between(n_lo).sigma
    trending = (abs(stats.rank_correlation) >= rank_threshold
                and abs(stats.drift_exponent) >= drift_threshold)
    localized = stats.relative_range < range_threshold and not trending
    return Localization(bool(localized), float(sigma.mean()),
                        float(sigma.max() - sigma.min()))


def _moving_average(x: np.ndarray, window: int) -> np.ndarray:
    # averages deviations from the centre point so constant input is returned unchanged
    h = window // 2
    n = x.size
    out = x.copy()
    if h == 0 or n == 0:
        return out
    if n > 2 * h:
        views = sliding_window_view(x, window)
        centre = x[h:n - h]
        out[h:n - h] = centre + (views - centre[:, None]).mean(axis=1)
    for i in list(range(min(h, n))) + list(range(max(n - h, h), n)):
        r = min(h, i, n - 1 - i)
        seg = x[i - r:i + r + 1]
        out[i] = x[i] + (seg - x[i]).mean()
    return out


def smooth(series: MomentSeries, window: int = DEFAULT_SMOOTH_WINDOW) -> MomentSeries:
    """Centred moving average of ``m1``, ``m2`` and ``sigma``.

    Near the ends the window shrinks symmetrically. The smoothed ``sigma`` is
    an average of sigmas, not recomputed from the smoothed moments.
    """
    if window < 1 or window % 2 == 0:
        raise ValueError(f"window must be odd and >= 1, got {window}")
    return MomentSeries(
        series.n.copy(),
        _moving_average(series.m1, window),
        _moving_average(series.m2, window),
        _moving_average(series.sigma, window),
        schedule=series.schedule,
    )
