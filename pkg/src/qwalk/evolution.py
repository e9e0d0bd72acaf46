"""One-step coin-and-shift map and full simulations with moment recording.

The map, with ``c = cos(theta_n)`` and ``s = sin(theta_n)``::

    a'_k = a_{k+1} c + b_{k+1} s
    b'_k = a_{k-1} s - b_{k-1} c
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from . import _core
from .errors import MemoryLimitError
from .lattice import Distribution, MomentRecord, WalkerState, moment_record, probability
from .schedules import CoinSchedule

DEFAULT_RECORD_EVERY = 10
DEFAULT_MAX_SITES = 2_000_000


@dataclass
class MomentSeries:
    """Moments sampled along a run; ``n`` strictly increasing."""

    n: np.ndarray
    m1: np.ndarray
    m2: np.ndarray
    sigma: np.ndarray
    schedule: str = ""
    norm: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.n = np.asarray(self.n, dtype=np.int64)
        self.m1 = np.asarray(self.m1, dtype=np.float64)
        self.m2 = np.asarray(self.m2, dtype=np.float64)
        self.sigma = np.asarray(self.sigma, dtype=np.float64)
        if not (self.n.shape == self.m1.shape == self.m2.shape == self.sigma.shape):
            raise ValueError("series columns must have equal length")
        if self.n.size > 1 and np.any(np.diff(self.n) <= 0):
            raise ValueError("steps must be strictly increasing")

    def __len__(self):
        return int(self.n.size)

    @property
    def records(self) -> list[MomentRecord]:
        return [
            MomentRecord(int(n), float(m1), float(m2), float(s))
            for n, m1, m2, s in zip(self.n, self.m1, self.m2, self.sigma)
        ]

    @classmethod
    def from_records(cls, records, schedule: str = "") -> MomentSeries:
        records = list(records)
        cols = list(zip(*records)) if records else [(), (), (), ()]
        return cls(*(np.array(c) for c in cols), schedule=schedule)

    def between(self, n_lo, n_hi=None) -> MomentSeries:
        """Records with ``n_lo <= n <= n_hi``."""
        mask = self.n >= n_lo
        if n_hi is not None:
            mask &= self.n <= n_hi
        norm = None if self.norm is None else self.norm[mask]
        return MomentSeries(self.n[mask], self.m1[mask], self.m2[mask], self.sigma[mask],
                            self.schedule, norm)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["n", "m1", "m2", "sigma"])
            for row in zip(self.n.tolist(), self.m1.tolist(), self.m2.tolist(),
                           self.sigma.tolist()):
                writer.writerow([row[0]] + [format(v, ".17g") for v in row[1:]])

    @classmethod
    def from_csv(cls, path, schedule: str = "") -> MomentSeries:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if header != ["n", "m1", "m2", "sigma"]:
                raise ValueError(f"{path}: expected header n,m1,m2,sigma")
            rows = [(int(r[0]), float(r[1]), float(r[2]), float(r[3])) for r in reader]
        return cls.from_records(rows, schedule=schedule)


def _prepare(state: WalkerState, nsteps: int, max_sites: int):
    width = state.a.size
    final_width = width + 2 * nsteps
    if final_width > max_sites:
        raise MemoryLimitError(
            f"window would reach {final_width} sites (cap {max_sites}); "
            "raise max_sites or shorten the run"
        )
    buf_a = np.zeros(final_width + 2, dtype=np.complex128)
    buf_b = np.zeros_like(buf_a)
    lo = nsteps
    hi = lo + width - 1
    buf_a[lo:hi + 1] = state.a
    buf_b[lo:hi + 1] = state.b
    origin = lo - state.k_min
    return buf_a, buf_b, lo, hi, origin


def _run(state, schedule, nsteps, record, max_sites):
    cs, sn = schedule.cos_sin(state.step, state.step + nsteps)
    buf_a, buf_b, lo, hi, origin = _prepare(state, nsteps, max_sites)
    out = np.zeros((int(record.sum()), 3))
    lo, hi = _core.propagate(buf_a, buf_b, lo, hi, origin, cs, sn, record, out)
    final = WalkerState(lo - origin, buf_a[lo:hi + 1].copy(), buf_b[lo:hi + 1].copy(),
                        step=state.step + nsteps)
    return final, out


def step(state: WalkerState, schedule: CoinSchedule) -> WalkerState:
    """Apply the map once with ``theta = theta_at(schedule, state.step)``."""
    final, _ = _run(state, schedule, 1, np.zeros(1, dtype=np.uint8), DEFAULT_MAX_SITES)
    return final


def evolve(initial: WalkerState, schedule: CoinSchedule, n_max: int,
           record_every: int = DEFAULT_RECORD_EVERY, max_sites: int = DEFAULT_MAX_SITES):
    """Run from ``initial.step`` up to step label ``n_max``.

    Moments are recorded at every step label divisible by ``record_every``
    and at ``n_max``. Returns ``(series, final_state)``.
    """
    if n_max < initial.step:
        raise ValueError(f"n_max={n_max} precedes the initial step {initial.step}")
    if record_every < 1:
        raise ValueError(f"record_every must be >= 1, got {record_every}")
    nsteps = n_max - initial.step
    labels = np.arange(initial.step + 1, n_max + 1, dtype=np.int64)
    record = (labels % record_every == 0).astype(np.uint8)
    if nsteps:
        record[-1] = 1
    final, out = _run(initial, schedule, nsteps, record, max_sites)
    n = labels[record.astype(bool)]
    recs = [moment_record(k, m1, m2) for k, (_, m1, m2) in zip(n.tolist(), out.tolist())]
    series = MomentSeries.from_records(recs, schedule=schedule.descriptor)
    series.norm = out[:, 0].copy()
    return series, final


def evolve_to(initial: WalkerState, schedule: CoinSchedule, n: int,
              max_sites: int = DEFAULT_MAX_SITES) -> WalkerState:
    """State at step label ``n`` without recording moments."""
    if n < initial.step:
        raise ValueError(f"target step {n} precedes the initial step {initial.step}")
    nsteps = n - initial.step
    final, _ = _run(initial, schedule, nsteps, np.zeros(nsteps, dtype=np.uint8), max_sites)
    return final


def snapshot_distribution(initial: WalkerState, schedule: CoinSchedule, n_target: int,
                          max_sites: int = DEFAULT_MAX_SITES) -> Distribution:
    """Distribution after ``n_target`` applications of the map (time ``n_target * tau``)."""
    if n_target < 0:
        raise ValueError(f"n_target must be >= 0, got {n_target}")
    return probability(evolve_to(initial, schedule, initial.step + n_target, max_sites))
