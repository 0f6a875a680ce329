"""Periodogram computation and parametric PSD models of the receiver noise.

Conventions: one-sided spectra throughout; ordinates Y_k = (2 dt / N) |X_k|^2
on the grid f_k = k / (N dt) for k = 1 .. N/2 - 1. DC is removed before
transforming and the Nyquist bin is excluded, so model and estimate share the
same grid. No windowing or segment averaging: the estimation theory assumes
raw, exponentially distributed ordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .kinetics import (ConcentrationPair, LigandKinetics, equilibrium_probabilities,
                       gamma_matrix, omega_matrix)
from .transduction import ReceiverSpec, flicker_psd, transducer_gain


@dataclass(frozen=True)
class Periodogram:
    """Raw periodogram of a sampled record."""

    f: np.ndarray
    power: np.ndarray
    n: int
    dt: float

    @property
    def df(self) -> float:
        return 1.0 / (self.n * self.dt)


@dataclass(frozen=True)
class PsdModelParams:
    """Everything the parametric PSD model needs besides frequency.

    lam holds the concentration pair the model is evaluated at; kin_m/kin_i
    the two species' reaction rates; receiver the transduction and noise
    parameters; temperature feeds the Debye screening chain.
    """

    lam: ConcentrationPair
    kin_m: LigandKinetics
    kin_i: LigandKinetics
    receiver: ReceiverSpec
    temperature: float = 300.0

    @cached_property
    def zeta(self) -> float:
        """Per-receptor current gain (A), cached across PSD evaluations."""
        return transducer_gain(self.receiver, self.temperature)

    def at(self, lam: ConcentrationPair) -> "PsdModelParams":
        """Same device, different concentration pair (zeta cache preserved)."""
        other = PsdModelParams(lam=lam, kin_m=self.kin_m, kin_i=self.kin_i,
                               receiver=self.receiver, temperature=self.temperature)
        other.__dict__["zeta"] = self.zeta
        return other


def sample_frequencies(n: int, dt: float) -> np.ndarray:
    """Periodogram grid f_k = k/(N dt), k = 1 .. N/2 - 1."""
    return np.arange(1, n // 2) / (n * dt)


def periodogram(x, dt: float) -> Periodogram:
    """One-sided raw periodogram of an even-length record, DC discarded."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 4 or n % 2 != 0:
        raise ValueError("periodogram requires an even record length >= 4")
    if dt <= 0:
        raise ValueError("dt must be positive")
    spec = np.fft.rfft(x - x.mean())
    power = (2.0 * dt / n) * np.abs(spec[1:n // 2]) ** 2
    return Periodogram(f=sample_frequencies(n, dt), power=power, n=n, dt=dt)


def binding_psd(f, p: PsdModelParams):
    """One-sided PSD (A^2/Hz) of the binding-noise current fluctuations.

    Quadratic form of the stationary indicator covariance with the real part
    of the resolvent of the relaxation matrix, summed over both charged bound
    states and scaled by receptor count and transduction gain.
    """
    f = np.asarray(f, dtype=float)
    om = omega_matrix(p.lam, p.kin_m, p.kin_i)
    gam = gamma_matrix(equilibrium_probabilities(p.lam, p.kin_m, p.kin_i))
    jw = 2j * np.pi * f
    # Closed-form inverse of (jw I - Omega), vectorized over frequency.
    a = jw - om[0, 0]
    b = -om[0, 1]
    c = -om[1, 0]
    d = jw - om[1, 1]
    det = a * d - b * c
    assert np.all(np.abs(det) > 0.0), "resolvent singular: nonpositive rates?"
    r11 = (d / det).real
    r12 = (-b / det).real
    r21 = (-c / det).real
    r22 = (a / det).real
    # Both bound states carry N_e electrons, so the charge weights are [1, 1]
    # after folding N_e into zeta: sum_{p,q} u_p Re{R}_{qp} with u = Gamma @ 1.
    u1 = gam[0, 0] + gam[0, 1]
    u2 = gam[1, 0] + gam[1, 1]
    quad = u1 * (r11 + r21) + u2 * (r12 + r22)
    out = 4.0 * p.receiver.N_r * p.zeta ** 2 * quad
    return out if out.ndim else float(out)


def total_psd(f, p: PsdModelParams):
    """Binding PSD plus device flicker noise; strictly positive, needs f > 0."""
    f = np.asarray(f, dtype=float)
    if np.any(f <= 0):
        raise ValueError("total PSD requires f > 0 (flicker diverges at DC)")
    out = binding_psd(f, p) + flicker_psd(f, p.receiver)
    return out if np.ndim(out) else float(out)


def no_interference_psd(f, c_m: float, p: PsdModelParams, lorentzian: bool = False):
    """Single-species model PSD used by the detector for threshold setting.

    The default binding term is 4 N_r zeta^2 p_b (1-p_b) / (2 pi f + 1/tau_m),
    kept in this first-power form deliberately; lorentzian=True switches to
    the standard tau_m / (1 + (2 pi f tau_m)^2) shape for sensitivity studies.
    """
    f = np.asarray(f, dtype=float)
    if np.any(f <= 0):
        raise ValueError("model PSD requires f > 0")
    if c_m < 0:
        raise ValueError("c_m must be nonnegative")
    kin = p.kin_m
    inv_tau = c_m * kin.k_plus + kin.k_minus
    p_b = c_m / (kin.K_D + c_m)
    if lorentzian:
        tau = 1.0 / inv_tau
        shape = tau / (1.0 + (2.0 * np.pi * f * tau) ** 2)
    else:
        shape = 1.0 / (2.0 * np.pi * f + inv_tau)
    out = 4.0 * p.receiver.N_r * p.zeta ** 2 * p_b * (1.0 - p_b) * shape \
        + flicker_psd(f, p.receiver)
    return out if out.ndim else float(out)


def folded_binding_psd(f, p: PsdModelParams, dt: float, n_folds: int = 8):
    """Binding PSD as seen by a sampler with period dt (alias-folded).

    Instantaneous sampling folds spectral content above the Nyquist rate back
    into the band: S_fold(f) = sum_n S(|f + n/dt|). The continuous spectrum
    decays as f^-2, so a modest number of folds converges; all fold images
    are evaluated in one vectorized call.
    """
    scalar = np.ndim(f) == 0
    f = np.atleast_1d(np.asarray(f, dtype=float))
    images = [f]
    for n in range(1, n_folds + 1):
        images.append(n / dt - f)
        images.append(n / dt + f)
    stacked = binding_psd(np.concatenate(images), p).reshape(2 * n_folds + 1, f.size)
    out = stacked.sum(axis=0)
    return float(out[0]) if scalar else out


def characteristic_frequencies(lam: ConcentrationPair, m: LigandKinetics,
                               i: LigandKinetics) -> tuple[float, float]:
    """Corner frequencies (Hz) of the two-species binding spectrum.

    Equal to the negated eigenvalues of the relaxation matrix divided by
    2 pi; returned as ('+' root, '-' root) with the first >= the second.
    """
    inv_tau_m = lam.c_m * m.k_plus + m.k_minus
    inv_tau_i = lam.c_i * i.k_plus + i.k_minus
    disc = np.sqrt((inv_tau_m - inv_tau_i) ** 2
                   + 4.0 * m.k_plus * lam.c_m * i.k_plus * lam.c_i)
    hi = (inv_tau_m + inv_tau_i + disc) / (4.0 * np.pi)
    lo = (inv_tau_m + inv_tau_i - disc) / (4.0 * np.pi)
    return float(hi), float(lo)
