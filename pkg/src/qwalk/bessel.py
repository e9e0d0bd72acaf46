"""Integer-order cylindrical Bessel functions of the first kind.

Values come from Miller's backward recurrence, started well above both the
largest requested order and the turning point ``m ~ x``, then normalised with
``J_0^2 + 2 sum_{m>=1} J_m^2 = 1``. The sign is fixed by
``J_0 + 2 sum_{k>=1} J_2k = 1``.
"""
from __future__ import annotations

import math

import numpy as np

from . import _core
from .errors import BesselRangeError

MAX_ORDER = 100_000
MAX_ARGUMENT = 100_000.0
# below this the recurrence factor 2m/x overflows; the series is exact here
SMALL_ARGUMENT = 1e-30


def truncation_order(x: float) -> int:
    """Order beyond which ``|J_m(x)|`` is below double precision resolution."""
    x = abs(float(x))
    return int(math.ceil(x + 40.0 * x ** (1.0 / 3.0) + 50.0))


def bessel_j_range(max_order: int, x: float) -> np.ndarray:
    """``[J_0(x), J_1(x), ..., J_max_order(x)]`` for ``x >= 0``."""
    max_order = int(max_order)
    x = float(x)
    if max_order < 0:
        raise ValueError(f"max_order must be >= 0, got {max_order}")
    if max_order > MAX_ORDER:
        raise BesselRangeError(f"order {max_order} exceeds {MAX_ORDER}")
    if not (0.0 <= x <= MAX_ARGUMENT):
        raise BesselRangeError(f"argument {x!r} outside [0, {MAX_ARGUMENT}]")
    out = np.zeros(max_order + 1)
    if x == 0.0:
        out[0] = 1.0
        return out
    if x < SMALL_ARGUMENT:
        return _small_argument(max_order, x)
    start = max(max_order, truncation_order(x))
    # keep the seed order even so the recurrence ends on a clean parity
    start += start % 2
    sum_sq, sum_even = _core.miller_backward(start, x, out)
    scale = math.copysign(1.0 / math.sqrt(sum_sq), sum_even)
    out *= scale
    return out


def _small_argument(max_order: int, x: float) -> np.ndarray:
    # J_m = (x/2)^m / m! (1 - (x/2)^2/(m+1)); later terms are below 1e-120 relative
    h = 0.5 * x
    out = np.zeros(max_order + 1)
    term = 1.0
    for m in range(max_order + 1):
        out[m] = term * (1.0 - h * h / (m + 1))
        term *= h / (m + 1)
        if term == 0.0:
            break
    return out


def bessel_j_signed(max_order: int, x: float) -> np.ndarray:
    """``J_m(x)`` for ``m = -max_order .. max_order`` (index ``m + max_order``)."""
    pos = bessel_j_range(max_order, x)
    neg = pos[:0:-1].copy()
    neg[(max_order - np.arange(max_order)) % 2 == 1] *= -1.0
    return np.concatenate([neg, pos])


def bessel_j(order: int, x: float) -> float:
    """``J_order(x)`` for integer ``order`` and ``x >= 0``; ``J_{-m} = (-1)^m J_m``."""
    order = int(order)
    m = abs(order)
    val = float(bessel_j_range(m, x)[m])
    if order < 0 and m % 2:
        val = -val
    return val
