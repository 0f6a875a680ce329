"""Symbol detectors for binary CSK under log-normal molecular interference.

Two receivers are modeled. The time-domain detector (TDD) thresholds a single
current sample; its threshold ignores interference while its true error rate
marginalizes over the interferer distribution. The frequency-domain detector
(FDD) thresholds the Whittle-estimated information concentration; its
threshold uses the single-species model PSD while its asymptotic error rate
uses Fisher variances of the full two-species model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .estimation import (NO_INTERFERENCE, TWO_SPECIES, WhittleFit, estimator_variance,
                         fisher_matrix)
from .kinetics import InterfererModel, bound_probability
from .spectral import PsdModelParams, sample_frequencies
from .transduction import flicker_variance

GENERAL = "general"
EQUAL_VARIANCE = "equal-variance fallback"


@dataclass(frozen=True)
class GaussianStats:
    """Mean and variance of a Gaussian observable (A, or molecules/m^3)."""

    mean: float
    var: float

    def __post_init__(self):
        if self.var <= 0:
            raise ValueError("variance must be positive")


@dataclass(frozen=True)
class DecisionThreshold:
    value: float
    regime: str = GENERAL


def ml_threshold(s0: GaussianStats, s1: GaussianStats,
                 rel_tol: float = 1e-12) -> DecisionThreshold:
    """Crossing point of two Gaussian likelihoods, the ML decision boundary.

    Falls back to the midpoint when the variances are numerically equal
    (the closed form is 0/0 there). The selected root lies in [mean0, mean1].
    """
    if s0.mean >= s1.mean:
        raise ValueError("ml_threshold requires s0.mean < s1.mean")
    v0, v1 = s0.var, s1.var
    if abs(v1 - v0) <= rel_tol * max(v0, v1):
        return DecisionThreshold(value=0.5 * (s0.mean + s1.mean), regime=EQUAL_VARIANCE)
    sd0, sd1 = math.sqrt(v0), math.sqrt(v1)
    root = math.sqrt((s1.mean - s0.mean) ** 2 + 2.0 * (v1 - v0) * math.log(sd1 / sd0))
    value = (v1 * s0.mean - v0 * s1.mean + sd1 * sd0 * root) / (v1 - v0)
    return DecisionThreshold(value=value, regime=GENERAL)


def _gauss_hermite_nodes(interferer: InterfererModel, n_nodes: int):
    """Concentration nodes and probability weights for log-normal averaging."""
    x, w = np.polynomial.hermite.hermgauss(n_nodes)
    mu_log, sigma_log = interferer.log_params()
    nodes = np.exp(mu_log + math.sqrt(2.0) * sigma_log * x)
    return nodes, w / math.sqrt(math.pi)


def tdd_output_stats(c_m: float, p: PsdModelParams, f_band: tuple[float, float],
                     interferer: InterfererModel | None = None,
                     n_nodes: int = 64) -> GaussianStats:
    """Gaussian statistics of the one-shot current sample for a given bit.

    Without an interferer this is the receiver's own nominal model (Langmuir
    occupancy of the information species). With an interferer the mean and
    variance are marginalized over the log-normal concentration by
    Gauss-Hermite quadrature in log space. Flicker power over f_band adds to
    the variance in both cases.
    """
    zeta = p.zeta
    n_r = p.receiver.N_r
    sigma_f2 = flicker_variance(f_band[0], f_band[1], p.receiver)
    if interferer is None:
        p_b = c_m / (p.kin_m.K_D + c_m)
        mean = zeta * n_r * p_b
        var = zeta ** 2 * n_r * p_b * (1.0 - p_b) + sigma_f2
        return GaussianStats(mean=mean, var=var)
    nodes, weights = _gauss_hermite_nodes(interferer, n_nodes)
    p_b = np.array([bound_probability(c_m, ci, p.kin_m, p.kin_i) for ci in nodes])
    mean_nb = float(np.sum(weights * p_b)) * n_r
    e_cond_var = float(np.sum(weights * p_b * (1.0 - p_b))) * n_r
    e_sq_mean = float(np.sum(weights * (p_b * n_r) ** 2))
    mean = zeta * mean_nb
    var = zeta ** 2 * (e_cond_var + e_sq_mean) - mean ** 2 + sigma_f2
    return GaussianStats(mean=mean, var=var)


def tdd_decide(delta_i: float, threshold: DecisionThreshold) -> int:
    """Bit decision on one current sample; the boundary itself maps to 0."""
    return 1 if delta_i > threshold.value else 0


def tdd_bep(stats0: GaussianStats, stats1: GaussianStats,
            threshold: DecisionThreshold) -> float:
    """Closed-form error probability of the one-sample threshold detector."""
    g = threshold.value
    term0 = erfc((g - stats0.mean) / math.sqrt(2.0 * stats0.var))
    term1 = erfc((stats1.mean - g) / math.sqrt(2.0 * stats1.var))
    return 0.25 * float(term0 + term1)


def whittle_variance_single(c_m: float, p: PsdModelParams, n: int, dt: float,
                            lorentzian: bool = False) -> float:
    """Nominal estimator variance of c_m under the single-species model PSD."""
    f = sample_frequencies(n, dt)
    fim = fisher_matrix(np.array([c_m]), p, f, model=NO_INTERFERENCE,
                        lorentzian=lorentzian)
    return float(estimator_variance(fim)[0])


def fdd_threshold(c_m0: float, c_m1: float, p: PsdModelParams, n: int, dt: float,
                  lorentzian: bool = False) -> DecisionThreshold:
    """ML threshold on the estimated concentration, interference-blind.

    The per-bit variances come from the single-species model PSD because the
    receiver does not know the interferer concentration.
    """
    if not 0 < c_m0 < c_m1:
        raise ValueError("need 0 < c_m0 < c_m1")
    v0 = whittle_variance_single(c_m0, p, n, dt, lorentzian)
    v1 = whittle_variance_single(c_m1, p, n, dt, lorentzian)
    return ml_threshold(GaussianStats(mean=c_m0, var=v0),
                        GaussianStats(mean=c_m1, var=v1))


def fdd_decide(fit: WhittleFit, threshold: DecisionThreshold) -> int:
    """Bit decision on the estimated information concentration."""
    return 1 if fit.lam_hat.c_m > threshold.value else 0


def fdd_asymptotic_variances(c_m0: float, c_m1: float, interferer: InterfererModel,
                             p: PsdModelParams, n: int, dt: float) -> tuple[float, float]:
    """Actual per-bit variances of the estimate, from the two-species FIM.

    Evaluated at (c_m|s, mu_ci); the (1,1) element of the inverse FIM carries
    the information-concentration variance with the interferer as nuisance.
    """
    f = sample_frequencies(n, dt)
    out = []
    for c_m in (c_m0, c_m1):
        fim = fisher_matrix(np.array([c_m, interferer.mu_ci]), p, f, model=TWO_SPECIES)
        out.append(float(estimator_variance(fim)[0]))
    return out[0], out[1]


def fdd_bep(c_m0: float, c_m1: float, interferer: InterfererModel,
            p: PsdModelParams, n: int, dt: float,
            lorentzian: bool = False) -> float:
    """Asymptotic error probability of the frequency-domain detector.

    The threshold deliberately uses the interference-blind variances while
    the error terms use the two-species Fisher variances at the mean
    interference level.
    """
    if c_m0 == c_m1:
        return 0.5
    thr = fdd_threshold(c_m0, c_m1, p, n, dt, lorentzian)
    v0, v1 = fdd_asymptotic_variances(c_m0, c_m1, interferer, p, n, dt)
    term0 = erfc((thr.value - c_m0) / math.sqrt(2.0 * v0))
    term1 = erfc((c_m1 - thr.value) / math.sqrt(2.0 * v1))
    return 0.25 * float(term0 + term1)
