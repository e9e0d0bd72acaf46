"""Discrete-time quantum walk on the line with a time-dependent coin.

The coin angle follows a deterministic schedule; for the power law
``cos(theta_n) = n**(-alpha)/sqrt(2)`` the spreading exponent of the walker
is ``1 - alpha``, logarithmic at ``alpha = 1`` and bounded beyond.
"""
from ._core import BACKEND
from .analysis import (
    FitResult,
    Localization,
    detect_localization,
    fit_logarithmic,
    fit_power_law,
    smooth,
)
from .analytic import (
    AnalyticModel,
    RegimePrediction,
    SigmaCoefficients,
    analytic_amplitudes,
    analytic_sigma,
    bessel_product_closed_form,
    bessel_product_sum,
    closed_form_moments,
    effective_time,
    predict_regime,
    sigma_coefficients,
)
from .bessel import bessel_j
from .evolution import MomentSeries, evolve, evolve_to, snapshot_distribution, step
from .lattice import (
    Distribution,
    MomentRecord,
    WalkerState,
    moments,
    new_localized,
    probability,
    symmetric_initial_state,
)
from .schedules import Constant, CoinSchedule, Linear, PowerLaw, Table, cos_sin_at, theta_at

__version__ = "0.1.0"
