import math

import numpy as np
import pytest
from scipy.integrate import quad

from biofetrx import (ReceiverSpec, debye_length, effective_charge, flicker_psd,
                      flicker_variance, gain, gate_capacitance, periodogram,
                      synthesize_flicker, transducer_gain)
from biofetrx.constants import CODATA
from conftest import C_GATE, DEBYE, QEFF_RATIO, SIGMA_F2_DEFAULT, ZETA

RX = ReceiverSpec()


class TestScreeningChain:
    def test_debye_length_table1(self):
        assert debye_length(RX, 300.0) == pytest.approx(DEBYE, rel=1e-9)

    def test_debye_scalings(self):
        conc4 = ReceiverSpec(c_ion=120.0)
        assert debye_length(conc4, 300.0) == pytest.approx(DEBYE / 2, rel=1e-12)
        assert debye_length(RX, 1200.0) == pytest.approx(2 * DEBYE, rel=1e-12)

    def test_effective_charge_limits(self):
        lam_d = debye_length(RX, 300.0)
        zero_r = ReceiverSpec(r=1e-30)
        assert effective_charge(zero_r, lam_d) == pytest.approx(CODATA.q, rel=1e-9)
        at_debye = ReceiverSpec(r=lam_d)
        assert effective_charge(at_debye, lam_d) == pytest.approx(CODATA.q / math.e, rel=1e-12)
        assert effective_charge(RX, lam_d) / CODATA.q == pytest.approx(QEFF_RATIO, rel=1e-9)

    def test_gate_capacitance(self):
        lam_d = debye_length(RX, 300.0)
        c_g = gate_capacitance(RX, lam_d)
        assert c_g == pytest.approx(C_GATE, rel=1e-9)
        area = RX.graphene_area
        c_gr = area * RX.eps_rel * CODATA.eps0 / lam_d
        c_q = RX.c_q * area
        assert c_g < min(c_gr, c_q)

    def test_gate_capacitance_series_limits(self):
        # contrived equal series capacitors: choose lam_d so C_Gr == C_Q
        lam_eq = RX.eps_rel * CODATA.eps0 / RX.c_q
        c_q = RX.c_q * RX.graphene_area
        assert gate_capacitance(RX, lam_eq) == pytest.approx(c_q / 2, rel=1e-12)
        # vanishing Debye length: double-layer capacitance dominates the series
        assert gate_capacitance(RX, 1e-15) == pytest.approx(c_q, rel=1e-6)

    def test_gain_chain(self):
        lam_d = debye_length(RX, 300.0)
        zeta = gain(RX, effective_charge(RX, lam_d), gate_capacitance(RX, lam_d))
        assert zeta == pytest.approx(ZETA, rel=1e-9)
        assert transducer_gain(RX, 300.0) == pytest.approx(zeta, rel=1e-12)
        # current deviation is linear in the bound count with zero intercept
        assert zeta * 0 == 0.0
        assert zeta * 24 == pytest.approx(2 * (zeta * 12), rel=1e-12)


class TestFlickerPsd:
    def test_value_at_one_hertz(self):
        assert flicker_psd(1.0, RX) == RX.S_f1Hz

    def test_unit_exponent_decade(self):
        assert flicker_psd(10.0, RX) == pytest.approx(RX.S_f1Hz / 10, rel=1e-12)

    def test_exponent_law(self):
        lo = ReceiverSpec(beta=0.8)
        hi = ReceiverSpec(beta=1.2)
        assert flicker_psd(100.0, lo) / flicker_psd(100.0, hi) == pytest.approx(
            100 ** 0.4, rel=1e-12)

    def test_rejects_nonpositive_frequency(self):
        with pytest.raises(ValueError):
            flicker_psd(0.0, RX)


class TestFlickerVariance:
    def test_unit_exponent_closed_form(self):
        got = flicker_variance(0.1, 50.0, RX)
        assert got == pytest.approx(RX.S_f1Hz * (1 + math.log(500.0)), rel=1e-12)
        tail, _ = quad(lambda f: flicker_psd(f, RX), 0.1, 50.0)
        assert got == pytest.approx(0.1 * flicker_psd(0.1, RX) + tail, rel=1e-9)

    def test_general_exponent_matches_quadrature(self):
        rx = ReceiverSpec(beta=0.9)
        got = flicker_variance(0.2, 80.0, rx)
        tail, _ = quad(lambda f: flicker_psd(f, rx), 0.2, 80.0)
        assert got == pytest.approx(0.2 * flicker_psd(0.2, rx) + tail, rel=1e-9)

    def test_empty_band(self):
        assert flicker_variance(2.0, 2.0, RX) == pytest.approx(
            2.0 * flicker_psd(2.0, RX), rel=1e-12)

    def test_default_band_value(self):
        assert flicker_variance(1 / 3.5, 100.0, RX) == pytest.approx(
            SIGMA_F2_DEFAULT, rel=1e-8)

    def test_rejects_bad_band(self):
        with pytest.raises(ValueError):
            flicker_variance(0.0, 10.0, RX)
        with pytest.raises(ValueError):
            flicker_variance(10.0, 1.0, RX)


class TestSynthesizeFlicker:
    def test_silent_device(self):
        rx = ReceiverSpec(S_f1Hz=0.0)
        assert not synthesize_flicker(512, 0.005, rx, seed=1).any()

    def test_deterministic_per_seed(self):
        a = synthesize_flicker(256, 0.01, RX, seed=5)
        b = synthesize_flicker(256, 0.01, RX, seed=5)
        assert np.array_equal(a, b)

    def test_zero_sample_mean(self):
        x = synthesize_flicker(700, 0.005, RX, seed=6)
        # DC bin is identically zero by construction
        assert abs(x.mean()) < 1e-12 * x.std()

    def test_parseval_per_realization(self):
        n, dt = 700, 0.005
        x = synthesize_flicker(n, dt, RX, seed=7)
        pg = periodogram(x, dt)
        spec = np.fft.rfft(x - x.mean())
        nyquist_term = abs(spec[-1]) ** 2 / n ** 2
        total = pg.power.sum() / (n * dt) + nyquist_term
        assert total == pytest.approx(np.var(x), rel=1e-9)

    def test_ensemble_periodogram_matches_target(self):
        n, dt, reps = 700, 0.005, 500
        acc = None
        for k in range(reps):
            pg = periodogram(synthesize_flicker(n, dt, RX, seed=80_000 + k), dt)
            acc = pg.power if acc is None else acc + pg.power
        mean = acc / reps
        target = flicker_psd(pg.f, RX)
        mid = (pg.f > 1.0) & (pg.f < 50.0)
        rel = np.abs(mean[mid] / target[mid] - 1)
        assert rel.max() < 0.10


def test_receiver_validation():
    with pytest.raises(ValueError):
        ReceiverSpec(N_r=-1)
    with pytest.raises(ValueError):
        ReceiverSpec(beta=1.5)
    with pytest.raises(ValueError):
        ReceiverSpec(g=0.0)
    assert ReceiverSpec(A_gr=2e-10).graphene_area == 2e-10
    assert RX.graphene_area == pytest.approx(1e-10)
