import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qwalk.errors import ScheduleExhausted
from qwalk.schedules import (
    Constant,
    Linear,
    PowerLaw,
    Table,
    cos_sin_at,
    schedule_from_spec,
    theta_at,
)


@pytest.mark.parametrize("alpha", [0.0, 0.3, 1.0, 2.5])
def test_powerlaw_starts_at_hadamard_angle(alpha):
    assert theta_at(PowerLaw(alpha), 1) == math.pi / 4


def test_powerlaw_theta_value():
    # acos(1/(2 sqrt 2)), 40-digit mpmath value
    assert theta_at(PowerLaw(0.5), 4) == pytest.approx(1.2094292028881888, abs=1e-15)


def test_constant_theta():
    for n in (1, 2, 999):
        assert theta_at(Constant(math.pi / 4), n) == math.pi / 4


def test_cos_sin_examples():
    c, s = cos_sin_at(PowerLaw(0.0), 7)
    assert c == pytest.approx(1 / math.sqrt(2), abs=4e-16)
    assert s == pytest.approx(1 / math.sqrt(2), abs=4e-16)
    c, s = cos_sin_at(PowerLaw(1.0), 10)
    assert c == pytest.approx(0.07071067811865475, rel=1e-15)
    assert s == pytest.approx(0.99749686716300017, abs=4e-16)
    c, s = cos_sin_at(Linear(0.25), 2)
    assert c == pytest.approx(0.0, abs=4e-16)
    assert s == pytest.approx(1.0, abs=4e-16)


@given(st.floats(0, 5), st.integers(1, 10**7))
def test_powerlaw_cos_range_and_unit_circle(alpha, n):
    c, s = cos_sin_at(PowerLaw(alpha), n)
    assert 0 < c <= math.sqrt(0.5)
    assert s >= 0
    assert abs(c * c + s * s - 1) < 1e-15
    th = theta_at(PowerLaw(alpha), n)
    # c below ~1e-17 rounds acos to pi/2 exactly
    assert math.pi / 4 <= th <= math.pi / 2


@given(st.floats(0.01, 4))
def test_powerlaw_cos_strictly_decreasing(alpha):
    c, _ = PowerLaw(alpha).cos_sin(1, 2000)
    assert np.all(np.diff(c) < 0)


def test_powerlaw_cos_tends_to_zero():
    c, _ = PowerLaw(0.5).cos_sin(10**8, 10**8 + 1)
    assert c[0] < 1e-4


def test_powerlaw_zero_equals_hadamard_exactly():
    p0 = PowerLaw(0.0)
    h = Constant(math.pi / 4)
    np.testing.assert_array_equal(p0.theta(1, 5000), h.theta(1, 5000))
    for a, b in zip(p0.cos_sin(1, 5000), h.cos_sin(1, 5000)):
        np.testing.assert_array_equal(a, b)


def test_scalar_and_block_agree():
    sched = PowerLaw(0.37)
    c, s = sched.cos_sin(1, 300)
    for n in (1, 2, 150, 299):
        assert cos_sin_at(sched, n) == (c[n - 1], s[n - 1])


def test_linear_reduces_modulo_two_pi():
    sched = Linear(math.sqrt(2) - 1)
    th = sched.theta(1, 10**6 + 1)
    assert th.min() >= 0 and th.max() < 2 * math.pi
    n = 10**6
    exact = math.fmod((math.sqrt(2) - 1) * (n - 1), 1.0) * 2 * math.pi
    assert th[-1] == pytest.approx(exact, abs=1e-9)


def test_table_lookup_and_exhaustion():
    sched = Table((0.1, 0.2, 0.3))
    assert theta_at(sched, 1) == 0.1
    assert theta_at(sched, 3) == 0.3
    with pytest.raises(ScheduleExhausted):
        theta_at(sched, 4)
    with pytest.raises(ScheduleExhausted):
        sched.cos_sin(2, 6)


def test_table_from_csv(tmp_path):
    path = tmp_path / "angles.csv"
    path.write_text("theta\n0.5\n1.0\n\n1.5\n")
    sched = Table.from_csv(path)
    assert sched.angles == (0.5, 1.0, 1.5)
    bad = tmp_path / "bad.csv"
    bad.write_text("0.5\nabc\n")
    with pytest.raises(ValueError, match="bad.csv:2"):
        Table.from_csv(bad)


def test_schedule_spec_roundtrip():
    for sched in (PowerLaw(0.3), Constant(0.7), Linear(0.01), Table((0.1, 0.2))):
        assert schedule_from_spec(sched.to_spec()) == sched
    assert schedule_from_spec({"kind": "powerlaw", "alpha": 0.3}) == PowerLaw(0.3)


def test_schedule_spec_errors():
    with pytest.raises(ValueError):
        schedule_from_spec({"kind": "random"})
    with pytest.raises(ValueError):
        schedule_from_spec({"alpha": 0.3})
    with pytest.raises(ValueError):
        schedule_from_spec({"kind": "powerlaw", "alpha": 0.3, "beta": 1})
    with pytest.raises(ValueError):
        PowerLaw(-0.1)


def test_steps_start_at_one():
    with pytest.raises(ValueError):
        theta_at(PowerLaw(0.3), 0)


def test_descriptor():
    assert PowerLaw(0.3).descriptor == "powerlaw(alpha=0.3)"
    assert Table((1.0, 2.0)).descriptor == "table(len=2)"
