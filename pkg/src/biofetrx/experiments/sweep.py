"""Detector performance sweeps: analytic BEP curves plus Monte Carlo validation.

Each sweep point is self-contained and seeded from (master seed, point index,
trial index) through numpy SeedSequence spawn keys, so points and trials can
run in any order, or in parallel, and still reduce to identical results.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from ..detection import (DecisionThreshold, fdd_asymptotic_variances, fdd_bep,
                         fdd_decide, fdd_threshold, ml_threshold, tdd_bep,
                         tdd_output_stats)
from ..estimation import ml_estimate
from ..kinetics import ConcentrationPair, LigandKinetics, bound_probability, simulate_trace
from ..spectral import characteristic_frequencies, periodogram
from ..transduction import flicker_variance, synthesize_flicker
from .scenario import Scenario

TDD_STREAM, FDD_STREAM = 0, 1


@dataclass
class ResultRow:
    """One sweep point: analytic and (optional) Monte Carlo detector metrics."""

    sweep_variable: str
    sweep_value: float
    bep_tdd: float = math.nan
    bep_fdd: float = math.nan
    bep_tdd_mc: float = math.nan
    bep_tdd_mc_lo: float = math.nan
    bep_tdd_mc_hi: float = math.nan
    bep_fdd_mc: float = math.nan
    bep_fdd_mc_lo: float = math.nan
    bep_fdd_mc_hi: float = math.nan
    gamma_td: float = math.nan
    gamma_fd: float = math.nan
    var_chat_m0: float = math.nan
    var_chat_m1: float = math.nan
    f_ch_m_bit0: float = math.nan
    f_ch_i_bit0: float = math.nan
    f_ch_m_bit1: float = math.nan
    f_ch_i_bit1: float = math.nan
    note: str = ""


CSV_COLUMNS = [
    ("sweep_variable", "-"),
    ("sweep_value", "gamma/eta: ratio, N: samples, dt: s"),
    ("bep_tdd", "probability"),
    ("bep_fdd", "probability"),
    ("bep_tdd_mc", "probability"),
    ("bep_tdd_mc_lo", "probability"),
    ("bep_tdd_mc_hi", "probability"),
    ("bep_fdd_mc", "probability"),
    ("bep_fdd_mc_lo", "probability"),
    ("bep_fdd_mc_hi", "probability"),
    ("gamma_td", "A"),
    ("gamma_fd", "molecules/m^3"),
    ("var_chat_m0", "(molecules/m^3)^2"),
    ("var_chat_m1", "(molecules/m^3)^2"),
    ("f_ch_m_bit0", "Hz"),
    ("f_ch_i_bit0", "Hz"),
    ("f_ch_m_bit1", "Hz"),
    ("f_ch_i_bit1", "Hz"),
    ("note", "-"),
]


def apply_sweep_value(scn: Scenario, variable: str, value: float) -> Scenario:
    """Scenario with one swept parameter replaced.

    eta rescales the interferer dissociation constant through its unbinding
    rate (binding rates stay fixed); N and dt alter only the periodogram
    sampling, never the one-shot detector band.
    """
    if variable == "gamma":
        return replace(scn, gamma=float(value))
    if variable == "eta":
        k_minus = float(value) * scn.kin_m.K_D * scn.kin_i.k_plus
        return replace(scn, kin_i=LigandKinetics(k_plus=scn.kin_i.k_plus, k_minus=k_minus))
    if variable == "N":
        return replace(scn, n_samples=int(value))
    if variable == "dt":
        return replace(scn, dt=float(value))
    raise ValueError(f"unknown sweep variable {variable!r}")


def tdd_threshold_for(scn: Scenario) -> DecisionThreshold:
    """Interference-blind current threshold from the nominal per-bit statistics."""
    params = scn.psd_params()
    s0 = tdd_output_stats(scn.received(0), params, scn.tdd_band, interferer=None)
    s1 = tdd_output_stats(scn.received(1), params, scn.tdd_band, interferer=None)
    return ml_threshold(s0, s1)


def wilson_interval(errors: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials == 0:
        return math.nan, math.nan
    p = errors / trials
    denom = 1.0 + z ** 2 / trials
    center = (p + z ** 2 / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z ** 2 / (4 * trials ** 2)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def simulate_tdd_errors(scn: Scenario, point_index: int, trials: int, seed: int,
                        observable: str = "gaussian") -> int:
    """Monte Carlo symbol errors of the time-domain detector.

    observable='gaussian' draws the current sample from the conditional
    Gaussian approximation given the interferer draw; 'binomial' draws the
    bound-receptor count exactly and adds Gaussian flicker.
    """
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(point_index, TDD_STREAM)))
    params = scn.psd_params()
    zeta = params.zeta
    n_r = scn.receiver.N_r
    interferer = scn.interferer()
    gamma_td = tdd_threshold_for(scn).value
    sigma_f2 = flicker_variance(scn.tdd_band[0], scn.tdd_band[1], scn.receiver)
    c_m = np.array([scn.received(0), scn.received(1)])

    bits = rng.integers(0, 2, size=trials)
    mu_log, sigma_log = interferer.log_params()
    c_i = np.exp(mu_log + sigma_log * rng.standard_normal(trials))
    x_m = c_m[bits] / scn.kin_m.K_D
    x_i = c_i / scn.kin_i.K_D
    p_b = (x_m + x_i) / (1.0 + x_m + x_i)
    if observable == "gaussian":
        var = zeta ** 2 * n_r * p_b * (1.0 - p_b) + sigma_f2
        delta_i = zeta * n_r * p_b + np.sqrt(var) * rng.standard_normal(trials)
    elif observable == "binomial":
        n_b = rng.binomial(n_r, p_b)
        delta_i = zeta * n_b + math.sqrt(sigma_f2) * rng.standard_normal(trials)
    else:
        raise ValueError(f"unknown observable {observable!r}")
    decided = (delta_i > gamma_td).astype(int)
    return int(np.sum(decided != bits))


def simulate_fdd_errors(scn: Scenario, point_index: int, trials: int, seed: int) -> int:
    """End-to-end Monte Carlo symbol errors of the frequency-domain detector.

    Every symbol runs the full pipeline: receptor-state simulation at a fresh
    interferer draw, flicker synthesis, periodogram, two-species Whittle fit,
    threshold on the estimated information concentration.
    """
    params = scn.psd_params()
    zeta = params.zeta
    interferer = scn.interferer()
    c_m = (scn.received(0), scn.received(1))
    thr = fdd_threshold(c_m[0], c_m[1], params, scn.n_samples, scn.dt,
                        lorentzian=scn.lorentzian_threshold)
    errors = 0
    for t in range(trials):
        rng = np.random.default_rng(
            np.random.SeedSequence(seed, spawn_key=(point_index, FDD_STREAM, t)))
        bit = int(rng.integers(0, 2))
        c_i = interferer.mu_ci if interferer.sigma_ci == 0 else float(
            rng.lognormal(*interferer.log_params()))
        lam = ConcentrationPair(c_m=c_m[bit], c_i=c_i)
        trace = simulate_trace(scn.receiver.N_r, lam, scn.kin_m, scn.kin_i,
                               scn.n_samples, scn.dt, seed=rng)
        x = zeta * (trace.counts_m + trace.counts_i).astype(float)
        x = x + synthesize_flicker(scn.n_samples, scn.dt, scn.receiver, seed=rng)
        fit = ml_estimate(periodogram(x, scn.dt), params, alias_folds=scn.alias_folds)
        if fdd_decide(fit, thr) != bit:
            errors += 1
    return errors


def _point_row(scn: Scenario, point_index: int, value: float, trials: int,
               seed: int, mc_observable: str) -> ResultRow:
    row = ResultRow(sweep_variable=scn.sweep_variable, sweep_value=value)
    local = apply_sweep_value(scn, scn.sweep_variable, value)
    try:
        params = local.psd_params()
        interferer = local.interferer()
        c_m0, c_m1 = local.received(0), local.received(1)

        thr_td = tdd_threshold_for(local)
        stats0 = tdd_output_stats(c_m0, params, local.tdd_band, interferer=interferer)
        stats1 = tdd_output_stats(c_m1, params, local.tdd_band, interferer=interferer)
        row.gamma_td = thr_td.value
        row.bep_tdd = tdd_bep(stats0, stats1, thr_td)

        thr_fd = fdd_threshold(c_m0, c_m1, params, local.n_samples, local.dt,
                               lorentzian=local.lorentzian_threshold)
        row.gamma_fd = thr_fd.value
        row.var_chat_m0, row.var_chat_m1 = fdd_asymptotic_variances(
            c_m0, c_m1, interferer, params, local.n_samples, local.dt)
        row.bep_fdd = fdd_bep(c_m0, c_m1, interferer, params, local.n_samples,
                              local.dt, lorentzian=local.lorentzian_threshold)

        row.f_ch_m_bit0, row.f_ch_i_bit0 = characteristic_frequencies(
            ConcentrationPair(c_m=c_m0, c_i=interferer.mu_ci), local.kin_m, local.kin_i)
        row.f_ch_m_bit1, row.f_ch_i_bit1 = characteristic_frequencies(
            ConcentrationPair(c_m=c_m1, c_i=interferer.mu_ci), local.kin_m, local.kin_i)

        if trials > 0:
            errs = simulate_tdd_errors(local, point_index, trials, seed, mc_observable)
            row.bep_tdd_mc = errs / trials
            row.bep_tdd_mc_lo, row.bep_tdd_mc_hi = wilson_interval(errs, trials)
            errs = simulate_fdd_errors(local, point_index, trials, seed)
            row.bep_fdd_mc = errs / trials
            row.bep_fdd_mc_lo, row.bep_fdd_mc_hi = wilson_interval(errs, trials)
    except (ValueError, np.linalg.LinAlgError) as exc:
        row.note = f"failed: {exc}"
    return row


def run_sweep(scn: Scenario, trials: int | None = None, seed: int | None = None,
              threads: int = 1, mc_observable: str = "gaussian") -> list[ResultRow]:
    """Evaluate every sweep point; failures are recorded per row, not raised.

    Deterministic for a given (scenario, seed) regardless of threads.
    """
    trials = scn.trials if trials is None else trials
    seed = scn.seed if seed is None else seed
    points = list(enumerate(scn.sweep_values))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(
                lambda iv: _point_row(scn, iv[0], iv[1], trials, seed, mc_observable),
                points))
    else:
        rows = [_point_row(scn, idx, val, trials, seed, mc_observable)
                for idx, val in points]
    return rows


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, float) and math.isnan(value):
        return ""
    return format(value, ".12g")


def rows_to_csv(rows: list[ResultRow]) -> str:
    """Render rows as CSV; the header names each column's unit."""
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
    writer.writerow([f"{name} [{unit}]" for name, unit in CSV_COLUMNS])
    for row in rows:
        writer.writerow([_fmt(getattr(row, name)) for name, _ in CSV_COLUMNS])
    return buf.getvalue()
