import numpy as np
import pytest
from scipy import stats
from scipy.linalg import expm

from biofetrx import (ConcentrationPair, InterfererModel, LigandKinetics,
                      bound_probability, draw_interferer, equilibrium_probabilities,
                      gamma_matrix, generator_matrix, omega_matrix,
                      sample_bound_count, simulate_trace)
from biofetrx.kinetics import REDUCTION

KIN_M = LigandKinetics(k_plus=4e-17, k_minus=2.0)
KIN_I = LigandKinetics(k_plus=4e-17, k_minus=8.0)


def random_system(rng):
    kin_m = LigandKinetics(k_plus=10 ** rng.uniform(-18, -16), k_minus=10 ** rng.uniform(-1, 2))
    kin_i = LigandKinetics(k_plus=10 ** rng.uniform(-18, -16), k_minus=10 ** rng.uniform(-1, 2))
    lam = ConcentrationPair(c_m=10 ** rng.uniform(15, 19), c_i=10 ** rng.uniform(15, 19))
    return lam, kin_m, kin_i


class TestBoundProbability:
    def test_empty_channel(self):
        assert bound_probability(0.0, 0.0, KIN_M, KIN_I) == 0.0

    def test_half_occupancy_at_kd(self):
        assert bound_probability(KIN_M.K_D, 0.0, KIN_M, KIN_I) == pytest.approx(0.5)

    def test_two_species_at_kd(self):
        kin_i = LigandKinetics(k_plus=4e-17, k_minus=2.0)
        c = KIN_M.K_D
        assert bound_probability(c, c, KIN_M, kin_i) == pytest.approx(2.0 / 3.0)

    def test_equals_total_equilibrium_occupancy(self, rng):
        for _ in range(50):
            lam, kin_m, kin_i = random_system(rng)
            eq = equilibrium_probabilities(lam, kin_m, kin_i)
            assert bound_probability(lam.c_m, lam.c_i, kin_m, kin_i) == pytest.approx(
                eq.p_rm + eq.p_ri, rel=1e-12)


class TestEquilibrium:
    def test_empty_channel(self):
        eq = equilibrium_probabilities(ConcentrationPair(0.0, 0.0), KIN_M, KIN_I)
        assert (eq.p_rm, eq.p_ri, eq.p_r) == (0.0, 0.0, 1.0)

    def test_langmuir_limit(self):
        c = 3.7e17
        eq = equilibrium_probabilities(ConcentrationPair(c, 0.0), KIN_M, KIN_I)
        assert eq.p_rm == pytest.approx(c / (KIN_M.K_D + c), rel=1e-12)

    def test_normalization_exact(self, rng):
        for _ in range(100):
            lam, kin_m, kin_i = random_system(rng)
            eq = equilibrium_probabilities(lam, kin_m, kin_i)
            assert eq.p_rm + eq.p_ri + eq.p_r == pytest.approx(1.0, abs=1e-15)

    def test_example_value(self):
        # c_m = c_i = 5e16: x_m = 1, x_i = 0.25 -> p_rm = 1/2.25
        eq = equilibrium_probabilities(ConcentrationPair(5e16, 5e16), KIN_M, KIN_I)
        assert eq.p_rm == pytest.approx(1.0 / 2.25, rel=1e-12)

    def test_against_simulated_stationary_occupancy(self):
        lam = ConcentrationPair(5e16, 5e16)
        eq = equilibrium_probabilities(lam, KIN_M, KIN_I)
        n_traces, n_r = 200, 120
        fracs = np.empty(n_traces)
        for k in range(n_traces):
            tr = simulate_trace(n_r, lam, KIN_M, KIN_I, 400, 0.01, seed=50_000 + k)
            fracs[k] = tr.counts_m.mean() / n_r
        se = fracs.std(ddof=1) / np.sqrt(n_traces)
        assert abs(fracs.mean() - eq.p_rm) < 3 * se


class TestRateMatrices:
    def test_generator_columns_sum_to_zero(self, rng):
        for _ in range(100):
            lam, kin_m, kin_i = random_system(rng)
            gen = generator_matrix(lam, kin_m, kin_i)
            assert np.allclose(gen.sum(axis=0), 0.0, atol=1e-9 * np.abs(gen).max())

    def test_omega_no_binding(self):
        om = omega_matrix(ConcentrationPair(0.0, 0.0), KIN_M, KIN_I)
        assert np.allclose(om, np.diag([-KIN_M.k_minus, -KIN_I.k_minus]))

    def test_omega_symmetric_species(self):
        kin = LigandKinetics(k_plus=4e-17, k_minus=2.0)
        om = omega_matrix(ConcentrationPair(6e17, 6e17), kin, kin)
        assert om[0, 0] == om[1, 1]
        assert om[0, 1] == om[1, 0]

    def test_omega_eigenvalues_stable(self, rng):
        for _ in range(100):
            lam, kin_m, kin_i = random_system(rng)
            eig = np.linalg.eigvals(omega_matrix(lam, kin_m, kin_i))
            assert np.all(eig.real < 0)

    def test_reduced_dynamics_match_full(self, rng):
        # The full master equation restricted to fluctuations must agree with
        # the reduced two-state relaxation mapped back through REDUCTION.
        for _ in range(25):
            lam, kin_m, kin_i = random_system(rng)
            gen = generator_matrix(lam, kin_m, kin_i)
            om = omega_matrix(lam, kin_m, kin_i)
            dp0 = REDUCTION @ np.array([0.01, -0.004])
            tau = 1.0 / np.abs(np.linalg.eigvals(om).real).min()
            for t in (0.1 * tau, tau, 3.0 * tau):
                full = expm(gen * t) @ dp0
                reduced = REDUCTION @ expm(om * t) @ np.array([0.01, -0.004])
                assert np.allclose(full, reduced, rtol=1e-9, atol=1e-14)


class TestGammaMatrix:
    def test_zero_occupancy(self):
        eq = equilibrium_probabilities(ConcentrationPair(0.0, 0.0), KIN_M, KIN_I)
        assert np.all(gamma_matrix(eq) == 0.0)

    def test_single_species_binomial_variance(self):
        eq = equilibrium_probabilities(ConcentrationPair(2e17, 0.0), KIN_M, KIN_I)
        gam = gamma_matrix(eq)
        assert gam[0, 0] == pytest.approx(eq.p_rm * (1 - eq.p_rm), rel=1e-12)
        assert gam[0, 1] == gam[1, 0] == gam[1, 1] == 0.0

    def test_positive_semidefinite(self, rng):
        for _ in range(100):
            lam, kin_m, kin_i = random_system(rng)
            gam = gamma_matrix(equilibrium_probabilities(lam, kin_m, kin_i))
            assert np.all(np.linalg.eigvalsh(gam) >= -1e-15)

    def test_against_monte_carlo_covariance(self, default_scenario, default_lam):
        scn = default_scenario
        gam = gamma_matrix(equilibrium_probabilities(default_lam, scn.kin_m, scn.kin_i))
        n_traces, stride = 400, 70
        cm, ci = [], []
        for k in range(n_traces):
            tr = simulate_trace(scn.receiver.N_r, default_lam, scn.kin_m, scn.kin_i,
                                700, 0.005, seed=40_000 + k)
            cm.append(tr.counts_m[::stride])
            ci.append(tr.counts_i[::stride])
        cm = np.concatenate(cm).astype(float)
        ci = np.concatenate(ci).astype(float)
        n_r = scn.receiver.N_r
        n_eff = cm.size
        # receptors are independent, so count moments scale the per-receptor ones
        for mc, model in ((np.var(cm, ddof=1) / n_r, gam[0, 0]),
                          (np.var(ci, ddof=1) / n_r, gam[1, 1]),
                          (np.cov(cm, ci, ddof=1)[0, 1] / n_r, gam[0, 1])):
            se = abs(model) * np.sqrt(2.0 / (n_eff - 1)) + 0.3 / np.sqrt(n_eff)
            assert abs(mc - model) < 3 * se


class TestSimulateTrace:
    def test_empty_channel_stays_unbound(self):
        tr = simulate_trace(50, ConcentrationPair(0.0, 0.0), KIN_M, KIN_I, 100, 0.01, seed=1)
        assert not tr.counts_m.any() and not tr.counts_i.any()

    def test_fast_unbinding_limit(self):
        fast_m = LigandKinetics(k_plus=4e-17, k_minus=1e6)
        fast_i = LigandKinetics(k_plus=4e-17, k_minus=1e6)
        tr = simulate_trace(60, ConcentrationPair(6e17, 6e17), fast_m, fast_i, 200, 0.005, seed=2)
        occupancy = (tr.counts_m + tr.counts_i).mean() / 60
        assert occupancy < 1e-3

    def test_langmuir_occupancy(self, default_scenario):
        lam = ConcentrationPair(6e17, 0.0)
        target = 6e17 / (KIN_M.K_D + 6e17)
        n_traces = 200
        fracs = np.empty(n_traces)
        for k in range(n_traces):
            tr = simulate_trace(120, lam, KIN_M, KIN_I, 700, 0.005, seed=60_000 + k)
            fracs[k] = tr.counts_m.mean() / 120
        se = fracs.std(ddof=1) / np.sqrt(n_traces)
        assert abs(fracs.mean() - target) < 3 * se

    def test_deterministic_per_seed(self, default_lam):
        a = simulate_trace(30, default_lam, KIN_M, KIN_I, 100, 0.005, seed=99)
        b = simulate_trace(30, default_lam, KIN_M, KIN_I, 100, 0.005, seed=99)
        c = simulate_trace(30, default_lam, KIN_M, KIN_I, 100, 0.005, seed=100)
        assert np.array_equal(a.counts_m, b.counts_m)
        assert np.array_equal(a.counts_i, b.counts_i)
        assert not np.array_equal(a.counts_m, c.counts_m)

    def test_counts_bounded(self, default_lam):
        tr = simulate_trace(40, default_lam, KIN_M, KIN_I, 300, 0.005, seed=3)
        total = tr.counts_m + tr.counts_i
        assert total.min() >= 0 and total.max() <= 40

    def test_stationarity_early_vs_late(self, default_lam):
        early = np.empty(300)
        late = np.empty(300)
        for k in range(300):
            tr = simulate_trace(120, default_lam, KIN_M, KIN_I, 200, 0.005, seed=20_000 + k)
            early[k] = tr.counts_m[3]
            late[k] = tr.counts_m[180]
        assert stats.ks_2samp(early, late).pvalue > 0.01

    def test_autocorrelation_decay_rate(self):
        # single species: ACF decays at rate c k+ + k- (26 rad/s here)
        lam = ConcentrationPair(6e17, 0.0)
        rate_true = 6e17 * KIN_M.k_plus + KIN_M.k_minus
        n_traces, n, dt, lags = 500, 700, 0.005, 7
        acc = np.zeros(lags)
        for k in range(n_traces):
            tr = simulate_trace(120, lam, KIN_M, KIN_I, n, dt, seed=30_000 + k)
            x = tr.counts_m - tr.counts_m.mean()
            for l in range(lags):
                acc[l] += np.dot(x[:n - l], x[l:]) / (n - l)
        slope = np.polyfit(np.arange(lags) * dt, np.log(acc / acc[0]), 1)[0]
        assert abs(-slope / rate_true - 1.0) < 0.10

    def test_invalid_arguments(self, default_lam):
        with pytest.raises(ValueError):
            simulate_trace(10, default_lam, KIN_M, KIN_I, 101, 0.005, seed=1)
        with pytest.raises(ValueError):
            simulate_trace(10, default_lam, KIN_M, KIN_I, 100, 0.0, seed=1)
        with pytest.raises(ValueError):
            simulate_trace(0, default_lam, KIN_M, KIN_I, 100, 0.005, seed=1)


class TestDraws:
    def test_bound_count_degenerate(self, rng):
        assert sample_bound_count(120, 0.0, rng) == 0
        assert sample_bound_count(120, 1.0, rng) == 120

    def test_bound_count_mean(self, rng):
        draws = np.array([sample_bound_count(120, 0.5, rng) for _ in range(20_000)])
        se = draws.std(ddof=1) / np.sqrt(draws.size)
        assert abs(draws.mean() - 60.0) < 3 * se

    def test_bound_count_rejects_bad_probability(self, rng):
        with pytest.raises(ValueError):
            sample_bound_count(120, 1.5, rng)

    def test_interferer_degenerate(self, rng):
        model = InterfererModel(mu_ci=3e17, sigma_ci=0.0)
        assert draw_interferer(model, rng) == 3e17

    def test_interferer_moments(self):
        model = InterfererModel(mu_ci=6e17, sigma_ci=6e16)
        rng = np.random.default_rng(11)
        mu_log, sigma_log = model.log_params()
        draws = np.exp(mu_log + sigma_log * rng.standard_normal(1_000_000))
        assert draws.mean() == pytest.approx(model.mu_ci, rel=3e-4)
        assert draws.std() == pytest.approx(model.sigma_ci, rel=5e-3)

    def test_interferer_scale_family(self):
        a = InterfererModel(mu_ci=1e17, sigma_ci=1e16)
        b = InterfererModel(mu_ci=2e17, sigma_ci=2e16)
        da = draw_interferer(a, np.random.default_rng(4))
        db = draw_interferer(b, np.random.default_rng(4))
        assert db == pytest.approx(2 * da, rel=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            InterfererModel(mu_ci=0.0, sigma_ci=1.0)
        with pytest.raises(ValueError):
            LigandKinetics(k_plus=0.0, k_minus=1.0)
        with pytest.raises(ValueError):
            ConcentrationPair(c_m=-1.0, c_i=0.0)
