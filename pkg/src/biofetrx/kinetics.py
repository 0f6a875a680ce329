"""Ligand-receptor reaction kinetics.

Each surface receptor is an independent three-state continuous-time Markov
chain: unbound (R), bound to an information molecule (RM), or bound to an
interferer (RI). This module provides the equilibrium occupancy statistics,
the linearized fluctuation matrices that feed the binding-noise PSD, and an
exact stochastic simulator of receptor-state traces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# State encoding used by the simulator.
FREE, BOUND_M, BOUND_I = 0, 1, 2

# Maps reduced fluctuations [dp_RM, dp_RI] back to the full three-state
# vector [dp_RM, dp_RI, dp_R]; the last row is forced by normalization.
REDUCTION = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]])


@dataclass(frozen=True)
class LigandKinetics:
    """Binding rate k_plus (m^3/s) and unbinding rate k_minus (1/s) of one species."""

    k_plus: float
    k_minus: float

    def __post_init__(self):
        if self.k_plus <= 0 or self.k_minus <= 0:
            raise ValueError("binding and unbinding rates must be positive")

    @property
    def K_D(self) -> float:
        """Dissociation constant k_minus/k_plus (molecules/m^3)."""
        return self.k_minus / self.k_plus


@dataclass(frozen=True)
class ConcentrationPair:
    """Steady concentrations of the information (c_m) and interferer (c_i) species."""

    c_m: float
    c_i: float = 0.0

    def __post_init__(self):
        if self.c_m < 0 or self.c_i < 0:
            raise ValueError("concentrations must be nonnegative")


@dataclass(frozen=True)
class EquilibriumState:
    """Stationary occupation probabilities of a single receptor."""

    p_rm: float
    p_ri: float

    @property
    def p_r(self) -> float:
        return 1.0 - self.p_rm - self.p_ri

    def as_vector(self) -> np.ndarray:
        return np.array([self.p_rm, self.p_ri, self.p_r])


@dataclass(frozen=True)
class InterfererModel:
    """Log-normal interferer concentration with arithmetic mean/std (molecules/m^3)."""

    mu_ci: float
    sigma_ci: float

    def __post_init__(self):
        if self.mu_ci <= 0:
            raise ValueError("InterfererModel.mu_ci must be positive")
        if self.sigma_ci < 0:
            raise ValueError("InterfererModel.sigma_ci must be nonnegative")

    def log_params(self) -> tuple[float, float]:
        """(mu, sigma) of ln c_i matching the arithmetic mean and std exactly."""
        s2 = math.log1p((self.sigma_ci / self.mu_ci) ** 2)
        return math.log(self.mu_ci) - 0.5 * s2, math.sqrt(s2)


@dataclass(frozen=True)
class ReceptorTrace:
    """Receptor-state counts sampled on the uniform grid k*dt, k = 0..N-1."""

    dt: float
    counts_m: np.ndarray
    counts_i: np.ndarray
    seed: int | None = None

    @property
    def n_samples(self) -> int:
        return self.counts_m.size


def bound_probability(c_m: float, c_i: float, m: LigandKinetics, i: LigandKinetics) -> float:
    """Probability that a single receptor is bound (to either species)."""
    if c_m < 0 or c_i < 0:
        raise ValueError("concentrations must be nonnegative")
    x = c_m / m.K_D + c_i / i.K_D
    return x / (1.0 + x)


def equilibrium_probabilities(lam: ConcentrationPair, m: LigandKinetics,
                              i: LigandKinetics) -> EquilibriumState:
    """Stationary occupancies of the three-state reaction at concentrations lam."""
    xm = lam.c_m / m.K_D
    xi = lam.c_i / i.K_D
    denom = 1.0 + xm + xi
    return EquilibriumState(p_rm=xm / denom, p_ri=xi / denom)


def generator_matrix(lam: ConcentrationPair, m: LigandKinetics,
                     i: LigandKinetics) -> np.ndarray:
    """Full master-equation rate matrix acting on [p_RM, p_RI, p_R].

    Columns sum to zero (probability conservation).
    """
    bm = m.k_plus * lam.c_m
    bi = i.k_plus * lam.c_i
    return np.array([
        [-m.k_minus, 0.0, bm],
        [0.0, -i.k_minus, bi],
        [m.k_minus, i.k_minus, -bm - bi],
    ])


def omega_matrix(lam: ConcentrationPair, m: LigandKinetics,
                 i: LigandKinetics) -> np.ndarray:
    """Relaxation matrix of the reduced fluctuations [dp_RM, dp_RI].

    Obtained by eliminating dp_R = -dp_RM - dp_RI from the master equation;
    its eigenvalues have strictly negative real parts for positive rates.
    """
    bm = m.k_plus * lam.c_m
    bi = i.k_plus * lam.c_i
    return np.array([
        [-(bm + m.k_minus), -bm],
        [-bi, -(bi + i.k_minus)],
    ])


def gamma_matrix(eq: EquilibriumState) -> np.ndarray:
    """Stationary covariance of the single-receptor state indicators (RM, RI)."""
    return np.array([
        [eq.p_rm * (1.0 - eq.p_rm), -eq.p_rm * eq.p_ri],
        [-eq.p_rm * eq.p_ri, eq.p_ri * (1.0 - eq.p_ri)],
    ])


def simulate_trace(n_receptors: int, lam: ConcentrationPair, m: LigandKinetics,
                   i: LigandKinetics, n_samples: int, dt: float, seed=None) -> ReceptorTrace:
    """Exact stochastic simulation of independent receptor-state trajectories.

    Every receptor carries competing exponential clocks: in the free state the
    exit rate is k+_m c_m + k+_i c_i (binding branch chosen by rate ratio), in
    a bound state the exit rate is the species' k-. Sojourn chains are drawn
    in vectorized batches and resolved onto the sample grid, so there is no
    time-step bias. Receptors start from the stationary distribution, hence
    no burn-in is needed. Deterministic for a given seed.
    """
    if n_samples < 2 or n_samples % 2 != 0:
        raise ValueError("n_samples must be even and at least 2")
    if dt <= 0:
        raise ValueError("dt must be positive")
    if n_receptors < 1:
        raise ValueError("n_receptors must be at least 1")

    rng = np.random.default_rng(seed)
    eq = equilibrium_probabilities(lam, m, i)
    r_bind_m = m.k_plus * lam.c_m
    r_bind_i = i.k_plus * lam.c_i
    r_bind = r_bind_m + r_bind_i
    exit_rate = np.array([r_bind, m.k_minus, i.k_minus])
    q_m = r_bind_m / r_bind if r_bind > 0 else 0.0
    t_end = (n_samples - 1) * dt

    state = rng.choice(3, size=n_receptors, p=[eq.p_r, eq.p_rm, eq.p_ri])

    def hold_times(states):
        raw = rng.exponential(1.0, size=states.size)
        rates = exit_rate[states]
        with np.errstate(divide="ignore"):
            return np.where(rates > 0, raw / np.where(rates > 0, rates, 1.0), np.inf)

    state_cols = [state]
    hold = hold_times(state)
    depart_cols = [hold]
    elapsed = hold.copy()
    while elapsed.min() <= t_end:
        prev = state_cols[-1]
        nxt = np.where(prev == FREE,
                       np.where(rng.random(n_receptors) < q_m, BOUND_M, BOUND_I),
                       FREE)
        state_cols.append(nxt)
        h = hold_times(nxt)
        elapsed = elapsed + h
        depart_cols.append(elapsed.copy())

    states = np.column_stack(state_cols)
    departs = np.column_stack(depart_cols)
    grid = np.arange(n_samples) * dt

    counts_m = np.zeros(n_samples, dtype=np.int64)
    counts_i = np.zeros(n_samples, dtype=np.int64)
    for r in range(n_receptors):
        at = states[r, np.searchsorted(departs[r], grid, side="right")]
        counts_m += at == BOUND_M
        counts_i += at == BOUND_I
    return ReceptorTrace(dt=dt, counts_m=counts_m, counts_i=counts_i,
                         seed=int(seed) if isinstance(seed, (int, np.integer)) else None)


def sample_bound_count(n_receptors: int, p_b: float, rng=None) -> int:
    """One binomial draw of the number of bound receptors."""
    if not 0.0 <= p_b <= 1.0:
        raise ValueError("p_b must lie in [0, 1]")
    return int(np.random.default_rng(rng).binomial(n_receptors, p_b))


def draw_interferer(model: InterfererModel, rng=None) -> float:
    """One log-normal interferer-concentration draw (moment-matched)."""
    if model.sigma_ci == 0.0:
        return model.mu_ci
    mu_log, sigma_log = model.log_params()
    return float(np.random.default_rng(rng).lognormal(mu_log, sigma_log))
