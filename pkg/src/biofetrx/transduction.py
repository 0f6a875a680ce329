"""Graphene bioFET transduction chain and device 1/f noise.

Bound charged ligands gate the transistor through Debye-screened effective
charge and the series combination of double-layer and quantum capacitance.
The per-receptor current gain zeta converts bound-receptor counts into
drain-current deviations; flicker noise adds on top, independent of binding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import CODATA


@dataclass(frozen=True)
class ReceiverSpec:
    """BioFET receiver parameters (SI units).

    N_r    : number of independent surface receptors
    r      : receptor length (m), sets Debye attenuation of ligand charge
    N_e    : electrons carried per bound ligand
    g      : transconductance (A/V)
    c_q    : graphene quantum capacitance per unit area (F/m^2)
    l_gr   : graphene channel width (m)
    A_gr   : graphene area exposed to electrolyte (m^2); defaults to l_gr^2
    c_ion  : ionic concentration of the medium (mol/m^3)
    eps_rel: relative permittivity of the medium
    S_f1Hz : 1/f noise power at 1 Hz (A^2/Hz)
    beta   : flicker exponent, empirically within [0.8, 1.2]
    """

    N_r: int = 120
    r: float = 2e-9
    N_e: int = 3
    g: float = 1.9044e-4
    c_q: float = 2e-2
    l_gr: float = 1e-5
    A_gr: float | None = None
    c_ion: float = 30.0
    eps_rel: float = 80.0
    S_f1Hz: float = 1e-23
    beta: float = 1.0

    def __post_init__(self):
        # N_r = 0 is a legal degenerate device (no binding noise at all).
        if self.N_r < 0:
            raise ValueError("ReceiverSpec.N_r must be nonnegative")
        for name in ("r", "N_e", "g", "c_q", "l_gr", "c_ion", "eps_rel"):
            if getattr(self, name) <= 0:
                raise ValueError(f"ReceiverSpec.{name} must be positive")
        if self.S_f1Hz < 0:
            raise ValueError("ReceiverSpec.S_f1Hz must be nonnegative")
        if not 0.8 <= self.beta <= 1.2:
            raise ValueError("ReceiverSpec.beta must lie in [0.8, 1.2]")
        if self.A_gr is not None and self.A_gr <= 0:
            raise ValueError("ReceiverSpec.A_gr must be positive")

    @property
    def graphene_area(self) -> float:
        """Exposed graphene area; square channel l_gr x l_gr unless overridden."""
        return self.A_gr if self.A_gr is not None else self.l_gr ** 2


def debye_length(spec: ReceiverSpec, T: float) -> float:
    """Ionic screening length lambda_D (m) at temperature T."""
    eps = spec.eps_rel * CODATA.eps0
    return math.sqrt(eps * CODATA.kB * T / (2.0 * CODATA.N_A * CODATA.q ** 2 * spec.c_ion))


def effective_charge(spec: ReceiverSpec, lambda_d: float) -> float:
    """Screened charge (C) a bound ligand electron presents at the graphene surface."""
    if lambda_d <= 0:
        raise ValueError("lambda_d must be positive")
    return CODATA.q * math.exp(-spec.r / lambda_d)


def gate_capacitance(spec: ReceiverSpec, lambda_d: float) -> float:
    """Series combination of double-layer and quantum capacitance (F)."""
    if lambda_d <= 0:
        raise ValueError("lambda_d must be positive")
    area = spec.graphene_area
    c_gr = area * spec.eps_rel * CODATA.eps0 / lambda_d
    c_q = spec.c_q * area
    return 1.0 / (1.0 / c_gr + 1.0 / c_q)


def gain(spec: ReceiverSpec, q_eff: float, c_g: float) -> float:
    """Current deviation per bound receptor, zeta = q_eff N_e g / C_G (A)."""
    if q_eff <= 0 or c_g <= 0:
        raise ValueError("q_eff and c_g must be positive")
    return q_eff * spec.N_e * spec.g / c_g


def transducer_gain(spec: ReceiverSpec, T: float) -> float:
    """End-to-end zeta (A per bound receptor) from the full screening chain."""
    lam_d = debye_length(spec, T)
    return gain(spec, effective_charge(spec, lam_d), gate_capacitance(spec, lam_d))


def flicker_psd(f, spec: ReceiverSpec):
    """One-sided 1/f noise PSD S_f1Hz / f^beta (A^2/Hz); requires f > 0."""
    f = np.asarray(f, dtype=float)
    if np.any(f <= 0):
        raise ValueError("flicker PSD requires f > 0")
    out = spec.S_f1Hz * f ** (-spec.beta)
    return out if out.ndim else float(out)


def flicker_variance(f_low: float, f_high: float, spec: ReceiverSpec) -> float:
    """Total flicker power (A^2) in the observation band.

    Below f_low the PSD is held constant at S_f(f_low); above it the
    power-law is integrated in closed form up to f_high.
    """
    if not 0 < f_low <= f_high:
        raise ValueError("need 0 < f_low <= f_high")
    base = f_low * float(flicker_psd(f_low, spec))
    if f_high == f_low:
        return base
    if spec.beta == 1.0:
        integral = spec.S_f1Hz * math.log(f_high / f_low)
    else:
        e = 1.0 - spec.beta
        integral = spec.S_f1Hz * (f_high ** e - f_low ** e) / e
    return base + integral


def synthesize_flicker(n_samples: int, dt: float, spec: ReceiverSpec, seed=None) -> np.ndarray:
    """Zero-mean Gaussian sequence whose expected periodogram equals S_f(f_k).

    Frequency-domain shaping: Hermitian complex-Gaussian spectrum with bin k
    scaled so that E|X_k|^2 = S_f(f_k) N / (2 dt), then inverse transformed.
    Deterministic per seed.
    """
    if n_samples < 2 or n_samples % 2 != 0:
        raise ValueError("n_samples must be even and at least 2")
    if dt <= 0:
        raise ValueError("dt must be positive")
    if spec.S_f1Hz == 0.0:
        return np.zeros(n_samples)
    rng = np.random.default_rng(seed)
    f = np.arange(1, n_samples // 2 + 1) / (n_samples * dt)
    target = flicker_psd(f, spec) * n_samples / (2.0 * dt)
    spec_bins = np.zeros(n_samples // 2 + 1, dtype=complex)
    re = rng.standard_normal(n_samples // 2 - 1)
    im = rng.standard_normal(n_samples // 2 - 1)
    spec_bins[1:-1] = np.sqrt(target[:-1] / 2.0) * (re + 1j * im)
    # Nyquist bin is real; its power enters the variance with trapezoid half weight.
    spec_bins[-1] = math.sqrt(target[-1]) * rng.standard_normal()
    return np.fft.irfft(spec_bins, n=n_samples)
