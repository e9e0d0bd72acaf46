"""Experiment configuration: a single JSON document, overridable from the CLI.

Example::

    {
      "mode": "sweep",
      "alphas": [0.0, 0.1, 0.2],
      "n_max": 10000,
      "n0": 10,
      "record_every": 10,
      "initial": {"site": 0, "a": [0.7071067811865476, 0.0], "b": [0.0, 0.7071067811865476]},
      "out": "results/sweep"
    }

``schedule`` (e.g. ``{"kind": "linear", "gamma": 0.01}``) replaces the
power-law family in the evolve, snapshot and analytic-compare modes.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import asdict, dataclass, field, fields, replace

from .errors import ConfigError
from .schedules import schedule_from_spec

MODES = ("evolve", "snapshot", "sweep", "analytic-compare", "identities")

MODE_DEFAULTS = {
    "sweep": {"alphas": [round(0.1 * i, 1) for i in range(10)], "n_max": 10_000},
    "evolve": {"alphas": [1.0, 2.0], "n_max": 100_000},
    "snapshot": {"alphas": [0.0, 0.3, 1.0, 2.0], "n_max": 5_000},
    "analytic-compare": {"alphas": [0.3], "n_max": 10_000},
    "identities": {"alphas": [], "n_max": 1},
}

_H = math.sqrt(0.5)


def _symmetric_initial():
    return {"site": 0, "a": [_H, 0.0], "b": [0.0, _H]}


@dataclass
class ExperimentConfig:
    mode: str = "sweep"
    alphas: list | None = None
    n_max: int | None = None
    n0: int = 10
    record_every: int = 10
    initial: dict = field(default_factory=_symmetric_initial)
    schedule: dict | None = None
    out: str = "results"
    smooth_window: int = 101
    fit_window: list | None = None
    max_sites: int = 2_000_000

    # -- (de)serialisation -------------------------------------------------
    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict, source: str = "<config>", text: str | None = None):
        if not isinstance(data, dict):
            raise ConfigError(f"{source}: top level must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            key = sorted(unknown)[0]
            raise ConfigError(f"{_where(source, text, key)}: unknown field '{key}'")
        cfg = cls(**data)
        cfg.validate(source, text)
        return cfg

    @classmethod
    def from_json(cls, text: str, source: str = "<config>"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        return cls.from_dict(data, source, text)

    @classmethod
    def load(cls, path) -> ExperimentConfig:
        with open(path) as fh:
            text = fh.read()
        return cls.from_json(text, str(path))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json())

    # -- semantics -----------------------------------------------------------
    def resolved(self) -> ExperimentConfig:
        """Copy with the mode's defaults filled in for unset fields."""
        defaults = MODE_DEFAULTS[self.mode]
        return replace(
            self,
            alphas=list(self.alphas) if self.alphas is not None else list(defaults["alphas"]),
            n_max=self.n_max if self.n_max is not None else defaults["n_max"],
        )

    def initial_amplitudes(self) -> tuple[int, complex, complex]:
        ini = self.initial
        return int(ini["site"]), complex(*ini["a"]), complex(*ini["b"])

    def validate(self, source: str = "<config>", text: str | None = None) -> None:
        def fail(key, msg):
            raise ConfigError(f"{_where(source, text, key)}: field '{key}': {msg}")

        if self.mode not in MODES:
            fail("mode", f"must be one of {', '.join(MODES)}, got {self.mode!r}")
        for key in ("n0", "record_every", "smooth_window", "max_sites"):
            val = getattr(self, key)
            if not isinstance(val, int) or isinstance(val, bool) or val < 1:
                fail(key, f"must be a positive integer, got {val!r}")
        if self.smooth_window % 2 == 0:
            fail("smooth_window", "must be odd")
        if self.n_max is not None:
            if not isinstance(self.n_max, int) or isinstance(self.n_max, bool):
                fail("n_max", f"must be an integer, got {self.n_max!r}")
            if self.mode not in ("identities", "snapshot") and self.n_max < self.n0:
                fail("n_max", f"n_max={self.n_max} is smaller than n0={self.n0}")
            if self.n_max < 1:
                fail("n_max", "must be >= 1")
        if self.alphas is not None:
            if not isinstance(self.alphas, list):
                fail("alphas", "must be a list of numbers")
            for a in self.alphas:
                if not isinstance(a, (int, float)) or isinstance(a, bool) or not a >= 0:
                    fail("alphas", f"values must be numbers >= 0, got {a!r}")
        ini = self.initial
        if not isinstance(ini, dict) or set(ini) != {"site", "a", "b"}:
            fail("initial", "expected {\"site\": int, \"a\": [re, im], \"b\": [re, im]}")
        try:
            _, a, b = self.initial_amplitudes()
        except (TypeError, ValueError):
            fail("initial", "amplitudes must be [re, im] pairs")
        if abs(abs(a) ** 2 + abs(b) ** 2 - 1.0) > 1e-12:
            fail("initial", f"|a|^2 + |b|^2 = {abs(a) ** 2 + abs(b) ** 2!r}, expected 1")
        if self.schedule is not None:
            try:
                schedule_from_spec(self.schedule)
            except (ValueError, KeyError, TypeError, OSError) as exc:
                fail("schedule", str(exc))
            if self.mode == "sweep":
                fail("schedule", "sweep mode always uses the power-law family")
        if self.fit_window is not None:
            fw = self.fit_window
            if not (isinstance(fw, list) and len(fw) == 2 and all(isinstance(v, int) for v in fw)
                    and fw[0] < fw[1]):
                fail("fit_window", "expected [n_lo, n_hi] with n_lo < n_hi")


def _where(source: str, text: str | None, key: str) -> str:
    """``source:line`` of the first occurrence of ``key`` in the raw text."""
    if text:
        m = re.search(r'"%s"\s*:' % re.escape(key), text)
        if m:
            return f"{source}:{text.count(chr(10), 0, m.start()) + 1}"
    return source
