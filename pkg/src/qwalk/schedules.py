"""Deterministic coin-angle schedules ``n -> theta_n``.

All schedules are evaluated through :meth:`CoinSchedule.cos_sin`, which
vectorises over a block of steps; the scalar helpers call it with a block of
one so scalar and vectorised paths agree bitwise.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ScheduleExhausted

# cos(pi/4) as rounded by libm; acos() of it returns pi/4 exactly.
HADAMARD_COS = math.sqrt(0.5)
TWO_PI = 2.0 * math.pi


def _steps(n_start: int, n_stop: int) -> np.ndarray:
    if n_start < 1:
        raise ValueError(f"steps start at 1, got {n_start}")
    return np.arange(n_start, n_stop, dtype=np.int64)


class CoinSchedule:
    """Base class. Subclasses implement :meth:`cos_sin`."""

    kind: str = ""

    def cos_sin(self, n_start: int, n_stop: int) -> tuple[np.ndarray, np.ndarray]:
        """Cosine and sine of ``theta_n`` for ``n_start <= n < n_stop``."""
        raise NotImplementedError

    def theta(self, n_start: int, n_stop: int) -> np.ndarray:
        c, s = self.cos_sin(n_start, n_stop)
        return np.arctan2(s, c)

    def to_spec(self) -> dict:
        raise NotImplementedError

    @property
    def descriptor(self) -> str:
        spec = self.to_spec()
        params = ",".join(f"{k}={v}" for k, v in spec.items() if k != "kind")
        return f"{spec['kind']}({params})"

    @property
    def is_slowly_varying(self) -> bool:
        """Whether the continuum (Bessel) theory applies to this schedule."""
        return False


@dataclass(frozen=True)
class Constant(CoinSchedule):
    theta0: float = math.pi / 4
    kind = "constant"

    def cos_sin(self, n_start, n_stop):
        n = _steps(n_start, n_stop)
        return np.full(n.size, math.cos(self.theta0)), np.full(n.size, math.sin(self.theta0))

    def theta(self, n_start, n_stop):
        return np.full(_steps(n_start, n_stop).size, float(self.theta0))

    def to_spec(self):
        return {"kind": "constant", "theta": self.theta0}

    @property
    def is_slowly_varying(self):
        return True


@dataclass(frozen=True)
class PowerLaw(CoinSchedule):
    """``cos(theta_n) = n**(-alpha) / sqrt(2)`` with ``theta_n`` in ``[pi/4, pi/2)``."""

    alpha: float = 0.0
    kind = "powerlaw"

    def __post_init__(self):
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")

    def cos_sin(self, n_start, n_stop):
        n = _steps(n_start, n_stop).astype(np.float64)
        c = HADAMARD_COS * n ** (-float(self.alpha))
        s = np.sqrt((1.0 - c) * (1.0 + c))
        return c, s

    def theta(self, n_start, n_stop):
        c, _ = self.cos_sin(n_start, n_stop)
        return np.arccos(c)

    def to_spec(self):
        return {"kind": "powerlaw", "alpha": self.alpha}

    @property
    def is_slowly_varying(self):
        return True


@dataclass(frozen=True)
class Linear(CoinSchedule):
    """``theta_n = 2 pi gamma (n - 1)`` reduced modulo ``2 pi``."""

    gamma: float = 0.0
    kind = "linear"

    def theta(self, n_start, n_stop):
        n = _steps(n_start, n_stop)
        # reduce the turn count before scaling so large n keeps full precision
        turns = np.mod(self.gamma * (n - 1).astype(np.float64), 1.0)
        return TWO_PI * turns

    def cos_sin(self, n_start, n_stop):
        th = self.theta(n_start, n_stop)
        return np.cos(th), np.sin(th)

    def to_spec(self):
        return {"kind": "linear", "gamma": self.gamma}


@dataclass(frozen=True)
class Table(CoinSchedule):
    """Explicit angles; ``angles[0]`` is used at step 1."""

    angles: tuple = field(default_factory=tuple)
    kind = "table"

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(float(x) for x in self.angles))

    def _slice(self, n_start, n_stop):
        n = _steps(n_start, n_stop)
        if n.size and n[-1] > len(self.angles):
            raise ScheduleExhausted(
                f"table holds {len(self.angles)} angles, step {int(n[-1])} requested"
            )
        return np.asarray(self.angles[n_start - 1:n_stop - 1], dtype=np.float64)

    def theta(self, n_start, n_stop):
        return self._slice(n_start, n_stop)

    def cos_sin(self, n_start, n_stop):
        th = self._slice(n_start, n_stop)
        return np.cos(th), np.sin(th)

    def to_spec(self):
        return {"kind": "table", "angles": list(self.angles)}

    @property
    def descriptor(self):
        return f"table(len={len(self.angles)})"

    @classmethod
    def from_csv(cls, path) -> Table:
        """Load a one-column CSV of radians; a non-numeric first row is a header."""
        angles = []
        with open(path, newline="") as fh:
            for i, row in enumerate(csv.reader(fh)):
                if not row or not row[0].strip():
                    continue
                try:
                    angles.append(float(row[0]))
                except ValueError:
                    if i == 0:
                        continue
                    raise ValueError(f"{path}:{i + 1}: not a number: {row[0]!r}") from None
        return cls(tuple(angles))


def theta_at(schedule: CoinSchedule, n: int) -> float:
    """Coin angle at step ``n >= 1``."""
    return float(schedule.theta(n, n + 1)[0])


def cos_sin_at(schedule: CoinSchedule, n: int) -> tuple[float, float]:
    c, s = schedule.cos_sin(n, n + 1)
    return float(c[0]), float(s[0])


def schedule_from_spec(spec: dict) -> CoinSchedule:
    """Build a schedule from its JSON form, e.g. ``{"kind": "powerlaw", "alpha": 0.3}``.

    A table may give ``"angles"`` inline or ``"path"`` to a one-column CSV.
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError(f"schedule spec needs a 'kind': {spec!r}")
    kind = str(spec["kind"]).lower()
    extra = set(spec) - {"kind"}
    if kind == "constant":
        _only(extra, {"theta"}, kind)
        return Constant(float(spec.get("theta", math.pi / 4)))
    if kind == "powerlaw":
        _only(extra, {"alpha"}, kind)
        return PowerLaw(float(spec["alpha"]))
    if kind == "linear":
        _only(extra, {"gamma"}, kind)
        return Linear(float(spec["gamma"]))
    if kind == "table":
        _only(extra, {"angles", "path"}, kind)
        if "path" in spec:
            return Table.from_csv(spec["path"])
        return Table(tuple(spec["angles"]))
    raise ValueError(f"unknown schedule kind {spec['kind']!r}")


def _only(given, allowed, kind):
    bad = given - allowed
    if bad:
        raise ValueError(f"unexpected field(s) for {kind} schedule: {', '.join(sorted(bad))}")
