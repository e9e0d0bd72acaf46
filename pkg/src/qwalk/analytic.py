"""Continuum (Bessel) theory of the slowly driven walk.

For a slowly varying coin the amplitudes obey ``2 da_k/dt* = a_{k+1} - a_{k-1}``
in the effective time ``t* = int cos(theta) dt`` (``tau = 1``), solved by

    a_k(t*) = sum_l (-1)^(k-l) a_l^0 J_{k-l}(t*)

and likewise for ``b``. The moments of the resulting distribution follow in
closed form from three lattice sums over the reference amplitudes.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import bessel
from .errors import InconsistentInitialData, NormalizationError
from .lattice import NORM_TOL, MomentRecord, WalkerState, moment_record
from .schedules import CoinSchedule, PowerLaw

SQRT2 = math.sqrt(2.0)
DEFAULT_N0 = 10


@dataclass
class AnalyticModel:
    """Reference amplitudes ``a^0, b^0`` on ``[k_min, ...]`` taken at step ``n0``."""

    n0: int
    k_min: int
    a0: np.ndarray
    b0: np.ndarray
    alpha: float | None = None

    def __post_init__(self):
        self.a0 = np.asarray(self.a0, dtype=np.complex128)
        self.b0 = np.asarray(self.b0, dtype=np.complex128)
        if self.a0.shape != self.b0.shape or self.a0.ndim != 1:
            raise ValueError("a0 and b0 must be 1-D arrays of equal length")
        if self.n0 < 1:
            raise ValueError(f"n0 must be >= 1, got {self.n0}")
        norm = float(np.sum(np.abs(self.a0) ** 2 + np.abs(self.b0) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise NormalizationError(f"reference amplitudes have norm {norm!r}")

    @classmethod
    def from_state(cls, state: WalkerState, alpha: float | None = None) -> AnalyticModel:
        """Seed the model from a discrete-map state; ``n0`` is the state's step."""
        return cls(state.step, state.k_min, state.a.copy(), state.b.copy(), alpha)

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_min + self.a0.size)

    @property
    def m1_0(self) -> float:
        p = np.abs(self.a0) ** 2 + np.abs(self.b0) ** 2
        return float(np.sum(self.sites * p))

    @property
    def m2_0(self) -> float:
        p = np.abs(self.a0) ** 2 + np.abs(self.b0) ** 2
        k = self.sites.astype(np.float64)
        return float(np.sum(k * k * p))


class SigmaCoefficients(NamedTuple):
    """``sigma(t*)^2 = A t*^2 + B t* + C``."""

    A: float
    B: float
    C: float

    def sigma(self, t_star):
        t = np.asarray(t_star, dtype=np.float64)
        var = self.A * t * t + self.B * t + self.C
        return np.sqrt(np.maximum(var, 0.0))


class RegimePrediction(NamedTuple):
    regime: str
    exponent: float
    law: str  # "power", "log" or "bounded"


def effective_time(alpha: float, n0: int, n):
    """Effective time from step ``n0`` to ``n`` under the power-law coin.

    ``(n**(1-alpha) - n0**(1-alpha)) / (sqrt(2) (1-alpha))``, which tends to
    ``ln(n/n0)/sqrt(2)`` at ``alpha = 1``. Evaluated through ``expm1`` so the
    two branches join smoothly.
    """
    n_arr = np.asarray(n, dtype=np.float64)
    if np.any(n_arr < n0) or n0 < 1:
        raise ValueError("effective time needs n >= n0 >= 1")
    log_ratio = np.log(n_arr / n0)
    beta = 1.0 - float(alpha)
    if beta == 0.0:
        out = log_ratio / SQRT2
    else:
        out = n0**beta * np.expm1(beta * log_ratio) / (beta * SQRT2)
    return float(out) if np.ndim(out) == 0 else out


def effective_time_for_schedule(schedule: CoinSchedule, n0: int, n):
    """Effective time ``sum_{m=n0}^{n-1} cos(theta_m)`` for an arbitrary schedule.

    Power-law schedules use the closed form. Others fall back to the step sum,
    with a warning unless the schedule is constant, since the continuum theory
    is only justified for slowly varying coins.
    """
    if isinstance(schedule, PowerLaw):
        return effective_time(schedule.alpha, n0, n)
    if not schedule.is_slowly_varying:
        warnings.warn(
            f"{schedule.descriptor}: continuum theory assumes a slowly varying coin",
            stacklevel=2,
        )
    n_arr = np.atleast_1d(np.asarray(n, dtype=np.int64))
    if n_arr.size and (n_arr.min() < n0 or n0 < 1):
        raise ValueError("effective time needs n >= n0 >= 1")
    top = int(n_arr.max()) if n_arr.size else n0
    c, _ = schedule.cos_sin(n0, top)
    cum = np.concatenate([[0.0], np.cumsum(c)])
    out = cum[n_arr - n0]
    return float(out[0]) if np.ndim(n) == 0 else out


def analytic_amplitudes(model: AnalyticModel, t_star: float) -> WalkerState:
    """Bessel-propagated amplitudes at effective time ``t_star``.

    The window is widened by the truncation order on each side; beyond it the
    Bessel factors are below double resolution. The returned state carries
    ``step = 0`` since ``t_star`` is not tied to a discrete step.
    """
    t = float(t_star)
    if t < 0:
        raise ValueError(f"t_star must be >= 0, got {t}")
    if t == 0.0:
        return WalkerState(model.k_min, model.a0.copy(), model.b0.copy(), step=0)
    m = bessel.truncation_order(t)
    j = bessel.bessel_j_signed(m, t)  # J_d at index d + m
    # a_k = sum_l a_l J_{l-k}; kernel index i holds J_{-(i - m)}
    kernel = j[::-1]
    a = np.convolve(model.a0, kernel)
    b = np.convolve(model.b0, kernel)
    return WalkerState(model.k_min - m, a, b, step=0)


def bessel_product_sum(p: int, nu: int, t: float) -> float:
    """``sum_mu mu^p J_mu(t) J_{mu-nu}(t)`` by direct truncated summation."""
    if p not in (0, 1, 2):
        raise ValueError(f"p must be 0, 1 or 2, got {p}")
    nu = int(nu)
    m = bessel.truncation_order(t) + abs(nu)
    j = bessel.bessel_j_signed(m, t)
    mu = np.arange(-m, m + 1)
    shifted = np.zeros_like(j)
    # shifted[i] = J_{mu_i - nu}
    if nu >= 0:
        shifted[nu:] = j[:j.size - nu]
    else:
        shifted[:nu] = j[-nu:]
    terms = mu.astype(np.float64) ** p * j * shifted
    return math.fsum(terms.tolist())


def bessel_product_closed_form(p: int, nu: int, t: float) -> float:
    """Closed-form value of :func:`bessel_product_sum`.

    p=0: delta(nu, 0)
    p=1: (t/2) [delta(nu, -1) + delta(nu, 1)]
    p=2: (t/2)^2 [delta(nu, -2) + 2 delta(nu, 0) + delta(nu, 2)]
         + (t/2) [delta(nu, 1) - delta(nu, -1)]
    """
    h = t / 2.0
    if p == 0:
        return 1.0 if nu == 0 else 0.0
    if p == 1:
        return h if abs(nu) == 1 else 0.0
    if p == 2:
        quad = {-2: 1.0, 0: 2.0, 2: 1.0}.get(nu, 0.0) * h * h
        lin = {1: h, -1: -h}.get(nu, 0.0)
        return quad + lin
    raise ValueError(f"p must be 0, 1 or 2, got {p}")


def initial_sums(model: AnalyticModel) -> tuple[float, float, float]:
    """Lattice sums ``(S1, S2, S3)`` of the reference amplitudes.

    S1 = sum_j Re[a_j a*_{j-1} + b_j b*_{j-1}]
    S2 = sum_j Re[a_j a*_{j-2} + b_j b*_{j-2}]
    S3 = sum_j (2j - 1) Re[a_j a*_{j-1} + b_j b*_{j-1}]
    """
    a, b = model.a0, model.b0

    def lag(d):
        if a.size <= d:
            return np.zeros(0)
        return (a[d:] * np.conj(a[:-d]) + b[d:] * np.conj(b[:-d])).real

    r1 = lag(1)
    r2 = lag(2)
    j = model.sites[1:].astype(np.float64)
    s3 = float(np.sum((2.0 * j - 1.0) * r1)) if r1.size else 0.0
    return float(np.sum(r1)), float(np.sum(r2)), s3


def closed_form_moments(model: AnalyticModel, t_star: float) -> MomentRecord:
    """First and second moments of the Bessel distribution at ``t_star``.

    The record's ``n`` field is 0; ``t_star`` is not tied to a discrete step.
    """
    t = float(t_star)
    s1, s2, s3 = initial_sums(model)
    m1 = -t * s1 + model.m1_0
    m2 = 0.5 * t * t * (1.0 + s2) - t * s3 + model.m2_0
    return moment_record(0, m1, m2)


def sigma_coefficients(model: AnalyticModel) -> SigmaCoefficients:
    s1, s2, s3 = initial_sums(model)
    m1_0, m2_0 = model.m1_0, model.m2_0
    a = 0.5 * (1.0 + s2) - s1 * s1
    if a < -NORM_TOL:
        raise InconsistentInitialData(f"leading coefficient A = {a!r} < 0")
    return SigmaCoefficients(a, -s3 + 2.0 * s1 * m1_0, m2_0 - m1_0 * m1_0)


def analytic_sigma(model: AnalyticModel, n, schedule: CoinSchedule | None = None):
    """Predicted ``sigma`` at step(s) ``n >= model.n0``.

    Uses the power-law effective time with ``model.alpha`` unless a schedule is
    given.
    """
    if schedule is not None:
        t = effective_time_for_schedule(schedule, model.n0, n)
    elif model.alpha is not None:
        t = effective_time(model.alpha, model.n0, n)
    else:
        raise ValueError("model has no alpha; pass the schedule")
    out = sigma_coefficients(model).sigma(t)
    return float(out) if np.ndim(out) == 0 else out


def predict_regime(alpha: float) -> RegimePrediction:
    """Asymptotic spreading regime of the power-law coin with exponent ``alpha``."""
    if alpha < 0 or math.isnan(alpha):
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if alpha == 0:
        return RegimePrediction("ballistic", 1.0, "power")
    if alpha < 0.5:
        return RegimePrediction("sub-ballistic", 1.0 - alpha, "power")
    if alpha == 0.5:
        return RegimePrediction("diffusive", 0.5, "power")
    if alpha < 1:
        return RegimePrediction("sub-diffusive", 1.0 - alpha, "power")
    if alpha == 1:
        return RegimePrediction("sub-diffusive", 0.0, "log")
    return RegimePrediction("localized", 0.0, "bounded")
