"""Experiment runners behind the CLI modes; every result is written as CSV."""
from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import analysis
from .analytic import (
    AnalyticModel,
    bessel_product_closed_form,
    bessel_product_sum,
    effective_time_for_schedule,
    predict_regime,
    sigma_coefficients,
)
from .config import ExperimentConfig
from .errors import InsufficientDataError
from .evolution import MomentSeries, evolve, evolve_to, snapshot_distribution
from .lattice import moments, new_localized, probability, write_distribution_csv
from .schedules import PowerLaw, schedule_from_spec

THREADS_ENV = "QWALK_THREADS"
SWEEP_TOLERANCE = 0.05
SWEEP_TOLERANCE_BALLISTIC = 0.02
COMPARE_TOLERANCE = 0.03
IDENTITY_TOLERANCE = 1e-10
IDENTITY_TIMES = (0.0, 0.5, 1.0, 5.0, 20.0, 100.0)
IDENTITY_MAX_NU = 4
EDGE_THRESHOLD = 1e-6


def _threads(n_jobs: int) -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return max(1, min(n_jobs, os.cpu_count() or 1))


def _map(fn, items):
    items = list(items)
    workers = _threads(len(items))
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _tag(alpha) -> str:
    return format(float(alpha), "g")


def _out_dir(config: ExperimentConfig) -> Path:
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _initial(config):
    return new_localized(*config.initial_amplitudes())


def _fit_window(config: ExperimentConfig):
    if config.fit_window is not None:
        return tuple(config.fit_window)
    return analysis.default_fit_window(config.n_max, config.n0)


def _schedules(config: ExperimentConfig):
    """``(alpha or None, schedule)`` pairs for the run."""
    if config.schedule is not None:
        sched = schedule_from_spec(config.schedule)
        alpha = sched.alpha if isinstance(sched, PowerLaw) else None
        return [(alpha, sched)]
    return [(float(a), PowerLaw(float(a))) for a in config.alphas]


# -- sweep: exponent table ---------------------------------------------------

def run_sweep(config: ExperimentConfig) -> list[dict]:
    """Power-law coin sweep: one series per alpha plus fitted-exponent tables."""
    config = config.resolved()
    out = _out_dir(config)
    n_lo, n_hi = _fit_window(config)
    initial = _initial(config)

    def one(alpha):
        series, _ = evolve(initial, PowerLaw(alpha), config.n_max, config.record_every,
                           config.max_sites)
        series.to_csv(out / f"series_alpha_{_tag(alpha)}.csv")
        fit = analysis.fit_power_law(series, n_lo, n_hi)
        predicted = 1.0 - alpha
        tol = SWEEP_TOLERANCE_BALLISTIC if alpha == 0 else SWEEP_TOLERANCE
        return {
            "alpha": alpha,
            "regime": predict_regime(alpha).regime,
            "fit": fit,
            "predicted": predicted,
            "deviation": fit.exponent - predicted,
            "tolerance": tol,
            "ok": abs(fit.exponent - predicted) <= tol,
        }

    rows = _map(one, [float(a) for a in config.alphas])
    _write_rows(out / "fits.csv", analysis.FIT_CSV_HEADER,
                [r["fit"].csv_row(r["alpha"]) for r in rows])
    _write_rows(
        out / "summary.csv",
        ["alpha", "regime", "predicted_exponent", "exponent", "deviation", "tolerance", "ok"],
        [[r["alpha"], r["regime"], r["predicted"], r["fit"].exponent, r["deviation"],
          r["tolerance"], r["ok"]] for r in rows],
    )
    return rows


# -- evolve: logarithmic and localized regimes -------------------------------

def analyse_series(series, alpha, config: ExperimentConfig) -> dict:
    """Regime-appropriate analysis of one series."""
    n_lo, n_hi = _fit_window(config)
    row = {"alpha": alpha, "regime": "", "law": "", "slope": np.nan, "intercept": np.nan,
           "r_squared": np.nan, "is_localized": None, "sigma_mean": np.nan,
           "sigma_range": np.nan}
    law = "power"
    if alpha is not None:
        pred = predict_regime(alpha)
        row["regime"], law = pred.regime, pred.law
    row["law"] = law
    try:
        if law == "log":
            fit = analysis.fit_logarithmic(analysis.smooth(series, config.smooth_window),
                                           n_lo, n_hi)
            row.update(slope=fit.exponent, intercept=fit.prefactor, r_squared=fit.r_squared)
        elif law == "power":
            fit = analysis.fit_power_law(series, n_lo, n_hi)
            row.update(slope=fit.exponent, intercept=fit.prefactor, r_squared=fit.r_squared)
        loc = analysis.detect_localization(series.between(n_lo, n_hi), n_lo)
        row.update(is_localized=loc.is_localized, sigma_mean=loc.sigma_mean,
                   sigma_range=loc.sigma_range)
    except InsufficientDataError as exc:
        row["note"] = str(exc)
    return row


def run_evolve(config: ExperimentConfig) -> list[dict]:
    """Long runs (default alpha = 1 and 2): log fit and localization verdicts."""
    config = config.resolved()
    out = _out_dir(config)
    initial = _initial(config)

    def one(pair):
        alpha, sched = pair
        series, _ = evolve(initial, sched, config.n_max, config.record_every, config.max_sites)
        name = f"alpha_{_tag(alpha)}" if alpha is not None else "schedule"
        series.to_csv(out / f"series_{name}.csv")
        row = analyse_series(series, alpha, config)
        row["schedule"] = sched.descriptor
        return row

    rows = _map(one, _schedules(config))
    header = ["schedule", "regime", "law", "slope", "intercept", "r_squared", "is_localized",
              "sigma_mean", "sigma_range"]
    _write_rows(out / "summary.csv", header,
                [["" if r[h] is None else r[h] for h in header] for r in rows])
    return rows


# -- snapshot: distributions at fixed time -----------------------------------

def profile_summary(dist) -> dict:
    """Support edge and the location of the outer peak of a distribution."""
    rec = moments(dist)
    k = dist.sites
    p = dist.probs
    right = k >= rec.m1
    peak = int(k[right][np.argmax(p[right])])
    near = np.abs(k - rec.m1) <= 2
    centre = float(p[near].max()) if near.any() else 0.0
    return {
        "support_edge": dist.support_edge(EDGE_THRESHOLD),
        "m1": rec.m1,
        "sigma": rec.sigma,
        "peak_site": peak,
        "peak_to_centre": float(p[right].max()) / centre if centre > 0 else np.inf,
    }


def run_snapshot(config: ExperimentConfig) -> list[dict]:
    """Distributions after ``n_max`` steps (default 5000) for each alpha."""
    config = config.resolved()
    out = _out_dir(config)
    initial = _initial(config)

    def one(pair):
        alpha, sched = pair
        dist = snapshot_distribution(initial, sched, config.n_max, config.max_sites)
        name = f"alpha_{_tag(alpha)}" if alpha is not None else "schedule"
        write_distribution_csv(dist, out / f"distribution_{name}.csv")
        row = profile_summary(dist)
        row.update(alpha=alpha, schedule=sched.descriptor, n_steps=config.n_max)
        return row

    rows = _map(one, _schedules(config))
    header = ["schedule", "n_steps", "support_edge", "m1", "sigma", "peak_site",
              "peak_to_centre"]
    _write_rows(out / "summary.csv", header, [[r[h] for h in header] for r in rows])
    return rows


# -- analytic-compare ---------------------------------------------------------

def compare_one(alpha, sched, config: ExperimentConfig) -> dict:
    """Discrete sigma against the Bessel prediction seeded at ``n0``."""
    initial = _initial(config)
    seed = evolve_to(initial, sched, config.n0, config.max_sites)
    model = AnalyticModel.from_state(seed, alpha)
    coeffs = sigma_coefficients(model)
    series, _ = evolve(seed, sched, config.n_max, config.record_every, config.max_sites)
    seed_rec = moments(probability(seed))
    n = np.concatenate([[config.n0], series.n])
    sigma_d = np.concatenate([[seed_rec.sigma], series.sigma])
    t_star = np.atleast_1d(effective_time_for_schedule(sched, config.n0, n))
    sigma_a = coeffs.sigma(t_star)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(sigma_a > 0, sigma_d / sigma_a, np.nan)
    result = {"alpha": alpha, "schedule": sched.descriptor, "n0": config.n0,
              "coefficients": coeffs, "n": n, "t_star": t_star,
              "sigma_discrete": sigma_d, "sigma_analytic": sigma_a, "ratio": ratio}
    n_lo, n_hi = _fit_window(config)

    def fit(sig):
        s = MomentSeries(n, np.zeros_like(sig), sig * sig, sig)
        return analysis.fit_power_law(s, n_lo, n_hi)

    checked = alpha is not None and alpha < 1
    try:
        fd, fa = fit(sigma_d), fit(sigma_a)
        diff = fa.exponent - fd.exponent
        result.update(fit_discrete=fd, fit_analytic=fa, exponent_difference=diff,
                      ok=(abs(diff) <= COMPARE_TOLERANCE) if checked else None)
    except InsufficientDataError as exc:
        result.update(fit_discrete=None, fit_analytic=None, exponent_difference=np.nan,
                      ok=False if checked else None, note=str(exc))
    return result


def run_analytic_compare(config: ExperimentConfig) -> list[dict]:
    config = config.resolved()
    out = _out_dir(config)
    results = _map(lambda pair: compare_one(pair[0], pair[1], config), _schedules(config))
    summary = []
    for r in results:
        name = f"alpha_{_tag(r['alpha'])}" if r["alpha"] is not None else "schedule"
        _write_rows(
            out / f"compare_{name}.csv",
            ["n", "t_star", "sigma_discrete", "sigma_analytic", "ratio"],
            zip(r["n"].tolist(), r["t_star"].tolist(), r["sigma_discrete"].tolist(),
                r["sigma_analytic"].tolist(), r["ratio"].tolist()),
        )
        fd, fa = r["fit_discrete"], r["fit_analytic"]
        a, b, c = r["coefficients"]
        summary.append([
            r["schedule"], r["n0"], a, b, c,
            fd.exponent if fd else np.nan, fa.exponent if fa else np.nan,
            r["exponent_difference"], "" if r["ok"] is None else r["ok"],
        ])
    _write_rows(out / "summary.csv",
                ["schedule", "n0", "A", "B", "C", "exponent_discrete", "exponent_analytic",
                 "exponent_difference", "ok"], summary)
    return results


# -- identities ---------------------------------------------------------------

def run_identities(times=IDENTITY_TIMES, max_nu: int = IDENTITY_MAX_NU) -> dict:
    """Check the Bessel product-sum identities; returns max errors per power ``p``."""
    errors = {0: 0.0, 1: 0.0, 2: 0.0}
    worst = {}
    for p in (0, 1, 2):
        for nu in range(-max_nu, max_nu + 1):
            for t in times:
                err = abs(bessel_product_sum(p, nu, t) - bessel_product_closed_form(p, nu, t))
                if not err <= errors[p]:
                    errors[p] = err
                    worst[p] = (nu, t)
    ok = all(e < IDENTITY_TOLERANCE for e in errors.values())
    return {"max_error": errors, "worst_case": worst, "ok": ok,
            "tolerance": IDENTITY_TOLERANCE}
