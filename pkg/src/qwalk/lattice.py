"""Spinor wave function on the line, position distributions and moments."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import MomentError, NormalizationError

NORM_TOL = 1e-12
VARIANCE_FLOOR = -1e-12


@dataclass
class WalkerState:
    """Amplitudes ``(a_k, b_k)`` on the contiguous window ``[k_min, k_max]``.

    ``a`` is the left-chirality component, ``b`` the right one. Everything
    outside the window is exactly zero. ``step`` is the discrete time label
    ``n`` (``t = (n - 1) tau``); a freshly prepared walker has ``step == 1``.
    """

    k_min: int
    a: np.ndarray
    b: np.ndarray
    step: int = 1

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=np.complex128)
        self.b = np.asarray(self.b, dtype=np.complex128)
        if self.a.ndim != 1 or self.a.shape != self.b.shape or self.a.size == 0:
            raise ValueError("a and b must be non-empty 1-D arrays of equal length")
        if self.step < 0:
            raise ValueError(f"step must be non-negative, got {self.step}")
        self.k_min = int(self.k_min)

    @property
    def k_max(self) -> int:
        return self.k_min + self.a.size - 1

    @property
    def window(self) -> tuple[int, int]:
        return self.k_min, self.k_max

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    def norm(self) -> float:
        return float(np.sum(self.a.real**2 + self.a.imag**2 + self.b.real**2 + self.b.imag**2))

    def amplitude(self, k: int) -> tuple[complex, complex]:
        """Return ``(a_k, b_k)``; zero outside the window."""
        if self.k_min <= k <= self.k_max:
            i = k - self.k_min
            return complex(self.a[i]), complex(self.b[i])
        return 0j, 0j

    def copy(self) -> WalkerState:
        return WalkerState(self.k_min, self.a.copy(), self.b.copy(), self.step)


@dataclass
class Distribution:
    """Position probabilities ``P_k`` on ``[k_min, k_min + len(probs) - 1]``."""

    k_min: int
    probs: np.ndarray
    step: int = 0

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=np.float64)
        self.k_min = int(self.k_min)

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_min + self.probs.size)

    def total(self) -> float:
        return float(self.probs.sum())

    def support_edge(self, threshold: float = 1e-6) -> int:
        """Largest ``|k|`` with ``P_k > threshold`` (0 if none)."""
        big = self.sites[self.probs > threshold]
        if big.size == 0:
            return 0
        return int(np.max(np.abs(big)))


class MomentRecord(NamedTuple):
    n: int
    m1: float
    m2: float
    sigma: float


def new_localized(k: int, a: complex, b: complex) -> WalkerState:
    """Walker concentrated on site ``k`` with chirality ``(a, b)`` at step 1."""
    a = complex(a)
    b = complex(b)
    norm = abs(a) ** 2 + abs(b) ** 2
    if abs(norm - 1.0) > NORM_TOL:
        raise NormalizationError(f"|a|^2 + |b|^2 = {norm!r}, expected 1")
    return WalkerState(k, np.array([a]), np.array([b]), step=1)


def symmetric_initial_state(k: int = 0) -> WalkerState:
    """The chirality ``(1, i)/sqrt(2)`` at ``k``, which spreads symmetrically."""
    h = math.sqrt(0.5)
    return new_localized(k, h, 1j * h)


def probability(state: WalkerState) -> Distribution:
    a, b = state.a, state.b
    p = a.real**2 + a.imag**2 + b.real**2 + b.imag**2
    return Distribution(state.k_min, p, step=state.step)


def moment_record(n: int, m1: float, m2: float) -> MomentRecord:
    """Build a record, clamping round-off negative variance to zero."""
    var = m2 - m1 * m1
    if var < VARIANCE_FLOOR:
        raise MomentError(f"negative variance {var!r} at n={n}")
    return MomentRecord(int(n), float(m1), float(m2), math.sqrt(max(var, 0.0)))


def moments(dist: Distribution) -> MomentRecord:
    k = dist.sites.astype(np.float64)
    kp = k * dist.probs
    return moment_record(dist.step, kp.sum(), (k * kp).sum())


def write_distribution_csv(dist: Distribution, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["k", "p"])
        for k, p in zip(dist.sites.tolist(), dist.probs.tolist()):
            writer.writerow([k, format(p, ".17g")])


def read_distribution_csv(path) -> Distribution:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["k", "p"]:
            raise ValueError(f"{path}: expected header k,p, got {','.join(header)}")
        rows = [(int(k), float(p)) for k, p in reader]
    if not rows:
        raise ValueError(f"{path}: no rows")
    ks = [k for k, _ in rows]
    if ks != list(range(ks[0], ks[0] + len(ks))):
        raise ValueError(f"{path}: sites must be consecutive and ascending")
    return Distribution(ks[0], np.array([p for _, p in rows]))
