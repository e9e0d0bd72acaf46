import math

import numpy as np
import pytest

from qwalk import _core
from qwalk.errors import MemoryLimitError, ScheduleExhausted
from qwalk.evolution import MomentSeries, evolve, evolve_to, snapshot_distribution, step
from qwalk.lattice import moments, new_localized, probability, symmetric_initial_state
from qwalk.schedules import Constant, Linear, PowerLaw, Table, cos_sin_at

from oracles import H, dict_step, inverse_step, textbook_hadamard_walk

ALL_SCHEDULES = [
    PowerLaw(0.0),
    PowerLaw(0.3),
    PowerLaw(1.0),
    PowerLaw(2.0),
    Constant(0.4),
    Linear(math.sqrt(2) - 1),
]


def _as_dict(state):
    return {k: (state.a[i], state.b[i]) for i, k in enumerate(state.sites)}


def test_one_step_example(kernels):
    s = step(new_localized(0, 1, 0), Constant(math.pi / 4))
    assert s.window == (-1, 1)
    assert s.amplitude(-1)[0] == pytest.approx(H, abs=1e-15)
    assert s.amplitude(1)[1] == pytest.approx(H, abs=1e-15)
    assert s.amplitude(0) == (0j, 0j)
    assert s.step == 2


def test_one_step_from_lower_component(kernels):
    # b only: a'_{-1} = s, b'_{1} = -c
    sched = PowerLaw(1.0)
    st = new_localized(3, 0, 1).copy()
    st.step = 10
    out = step(st, sched)
    c, s = cos_sin_at(sched, 10)
    assert out.amplitude(2) == (pytest.approx(s, abs=1e-16), 0j)
    assert out.amplitude(4) == (0j, pytest.approx(-c, abs=1e-16))


@pytest.mark.parametrize("schedule", ALL_SCHEDULES, ids=lambda s: s.descriptor)
def test_matches_dictionary_oracle(kernels, schedule):
    start = new_localized(2, 0.6, 0.8j)
    psi = _as_dict(start)
    c, s = schedule.cos_sin(1, 61)
    for j in range(60):
        psi = dict_step(psi, c[j], s[j])
    final = evolve_to(start, schedule, 61)
    for k, (a, b) in psi.items():
        fa, fb = final.amplitude(k)
        assert abs(fa - a) < 1e-13 and abs(fb - b) < 1e-13


def test_hadamard_walk_matches_textbook(kernels):
    nsteps = 200
    ref = textbook_hadamard_walk(nsteps)
    final = evolve_to(symmetric_initial_state(), PowerLaw(0.0), 1 + nsteps)
    worst = 0.0
    for k, (a, b) in ref.items():
        fa, fb = final.amplitude(k)
        worst = max(worst, abs(fa - a), abs(fb - b))
    assert worst < 1e-13


@pytest.mark.parametrize("schedule", ALL_SCHEDULES, ids=lambda s: s.descriptor)
def test_unitarity_over_ten_thousand_steps(kernels, schedule):
    series, final = evolve(symmetric_initial_state(), schedule, 10_000, record_every=100)
    assert np.max(np.abs(series.norm - 1.0)) < 1e-12
    assert abs(final.norm() - 1.0) < 1e-12


def test_unitarity_table_schedule(kernels):
    rng = np.random.default_rng(11)
    sched = Table(tuple(rng.uniform(0, 2 * math.pi, 10_000)))
    series, _ = evolve(symmetric_initial_state(), sched, 10_000, record_every=500)
    assert np.max(np.abs(series.norm - 1.0)) < 1e-12


@pytest.mark.parametrize("nsteps", [1, 7, 100])
@pytest.mark.parametrize("schedule", [PowerLaw(0.3), Linear(0.123), Constant(1.1)],
                         ids=lambda s: s.descriptor)
def test_reversibility(kernels, schedule, nsteps):
    start = new_localized(-4, math.cos(0.3), 1j * math.sin(0.3))
    final = evolve_to(start, schedule, 1 + nsteps)
    a, b, k_min = final.a, final.b, final.k_min
    c, s = schedule.cos_sin(1, 1 + nsteps)
    for j in reversed(range(nsteps)):
        a, b, k_min = inverse_step(a, b, k_min, c[j], s[j])
    assert k_min == start.k_min
    assert abs(a[0] - start.a[0]) < 1e-10
    assert abs(b[0] - start.b[0]) < 1e-10


def test_backends_agree():
    if _core.BACKEND != "compiled":
        pytest.skip("compiled kernels not built")
    from qwalk import _fallback, _kernels

    rng = np.random.default_rng(3)
    width, nsteps = 9, 400
    a0 = rng.normal(size=width) + 1j * rng.normal(size=width)
    b0 = rng.normal(size=width) + 1j * rng.normal(size=width)
    cs, sn = PowerLaw(0.7).cos_sin(1, 1 + nsteps)
    record = (np.arange(nsteps) % 3 == 0).astype(np.uint8)
    results = []
    for mod in (_kernels, _fallback):
        a = np.zeros(width + 2 * nsteps + 2, complex)
        b = np.zeros_like(a)
        a[nsteps:nsteps + width] = a0
        b[nsteps:nsteps + width] = b0
        out = np.zeros((int(record.sum()), 3))
        lo, hi = mod.propagate(a, b, nsteps, nsteps + width - 1, nsteps + 4, cs, sn, record, out)
        results.append((lo, hi, a, b, out))
    (lo1, hi1, a1, b1, o1), (lo2, hi2, a2, b2, o2) = results
    assert (lo1, hi1) == (lo2, hi2)
    np.testing.assert_allclose(a1, a2, rtol=0, atol=1e-12)
    np.testing.assert_allclose(b1, b2, rtol=0, atol=1e-12)
    np.testing.assert_allclose(o1, o2, rtol=1e-11, atol=1e-11)


def test_recorded_moments_match_distribution(kernels):
    series, final = evolve(symmetric_initial_state(), PowerLaw(0.5), 537, record_every=50)
    assert series.n.tolist() == list(range(50, 537, 50)) + [537]
    rec = moments(probability(final))
    assert series.m1[-1] == pytest.approx(rec.m1, abs=1e-10)
    assert series.m2[-1] == pytest.approx(rec.m2, rel=1e-12)
    assert series.sigma[-1] == pytest.approx(rec.sigma, rel=1e-12)


def test_evolve_continues_from_a_later_step(kernels):
    sched = PowerLaw(0.3)
    mid = evolve_to(symmetric_initial_state(), sched, 250)
    _, direct = evolve(symmetric_initial_state(), sched, 400)
    _, resumed = evolve(mid, sched, 400)
    assert resumed.step == direct.step == 400
    np.testing.assert_allclose(resumed.a, direct.a, atol=1e-14)


def test_evolve_zero_steps():
    start = symmetric_initial_state()
    series, final = evolve(start, PowerLaw(0.3), 1)
    assert len(series) == 0
    assert final.window == start.window


def test_memory_guard():
    with pytest.raises(MemoryLimitError):
        evolve(symmetric_initial_state(), PowerLaw(0.3), 1000, max_sites=1000)
    series, _ = evolve(symmetric_initial_state(), PowerLaw(0.3), 500, max_sites=1000)
    assert series.n[-1] == 500


def test_table_exhaustion_propagates():
    with pytest.raises(ScheduleExhausted):
        evolve(symmetric_initial_state(), Table((0.1,) * 20), 30)


def test_argument_validation():
    with pytest.raises(ValueError):
        evolve(symmetric_initial_state(), PowerLaw(0.3), 0)
    with pytest.raises(ValueError):
        evolve(symmetric_initial_state(), PowerLaw(0.3), 10, record_every=0)
    with pytest.raises(ValueError):
        snapshot_distribution(symmetric_initial_state(), PowerLaw(0.3), -1)


def test_snapshot_examples():
    d = snapshot_distribution(symmetric_initial_state(), PowerLaw(0.0), 1)
    assert d.k_min == -1 and d.probs.size == 3
    assert d.probs == pytest.approx([0.5, 0.0, 0.5], abs=1e-15)
    d0 = snapshot_distribution(symmetric_initial_state(), PowerLaw(0.0), 0)
    assert d0.probs.tolist() == [pytest.approx(1.0)]


def test_series_csv_roundtrip(tmp_path):
    series, _ = evolve(symmetric_initial_state(), PowerLaw(0.4), 300)
    path = tmp_path / "s.csv"
    series.to_csv(path)
    assert path.read_text().splitlines()[0] == "n,m1,m2,sigma"
    back = MomentSeries.from_csv(path)
    np.testing.assert_array_equal(back.n, series.n)
    np.testing.assert_array_equal(back.sigma, series.sigma)
    np.testing.assert_array_equal(back.m2, series.m2)


def test_series_between():
    series, _ = evolve(symmetric_initial_state(), PowerLaw(0.4), 300)
    part = series.between(100, 200)
    assert part.n[0] == 100 and part.n[-1] == 200
    assert part.norm.size == len(part)


def test_zero_flanks_and_gaps(kernels):
    # exact zeros at the window edges and inside must not change the result
    from qwalk.lattice import WalkerState

    a = np.array([0, 0, 0.6, 0, 0, 0.48j, 0, 0], complex)
    b = np.array([0, 0, 0, 0, 0.64, 0, 0, 0], complex)
    start = WalkerState(-3, a, b)
    psi = _as_dict(start)
    sched = PowerLaw(0.6)
    c, s = sched.cos_sin(1, 41)
    for j in range(40):
        psi = dict_step(psi, c[j], s[j])
    series, final = evolve(start, sched, 41, record_every=1)
    assert final.window == (-43, 44)
    for k, (ra, rb) in psi.items():
        fa, fb = final.amplitude(k)
        assert abs(fa - ra) < 1e-14 and abs(fb - rb) < 1e-14
    assert np.max(np.abs(series.norm - 1.0)) < 1e-13
