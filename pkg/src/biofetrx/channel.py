"""Advection-diffusion transport of released ligands along the microfluidic channel.

Transport is the unbounded 1-D convection-diffusion solution with a
Taylor-Aris style effective diffusivity for rectangular cross-sections.
All quantities are SI; concentrations are molecules/m^3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ChannelSpec:
    """Microfluidic channel geometry, flow and transport parameters.

    h_ch, l_ch : channel height and width (m)
    u          : mean flow velocity along the channel axis (m/s)
    D_0        : intrinsic ligand diffusion coefficient (m^2/s)
    x_R        : distance from transmitter to receiver center (m)
    T          : medium temperature (K)
    """

    h_ch: float
    l_ch: float
    u: float
    D_0: float
    x_R: float
    T: float = 300.0

    def __post_init__(self):
        for name in ("h_ch", "l_ch", "D_0", "T"):
            if getattr(self, name) <= 0:
                raise ValueError(f"ChannelSpec.{name} must be positive")
        # u = 0 and x_R = 0 are legal for the generic profile; the
        # sampling-time operations reject u = 0 themselves.
        if self.u < 0:
            raise ValueError("ChannelSpec.u must be nonnegative")
        if self.x_R < 0:
            raise ValueError("ChannelSpec.x_R must be nonnegative")

    @property
    def A_ch(self) -> float:
        """Cross-sectional area (m^2)."""
        return self.h_ch * self.l_ch


@dataclass(frozen=True)
class ReleaseEvent:
    """A single instantaneous release of N_m molecules at the channel inlet."""

    N_m: int

    def __post_init__(self):
        if self.N_m < 0 or int(self.N_m) != self.N_m:
            raise ValueError("ReleaseEvent.N_m must be a nonnegative integer")


def effective_diffusion(spec: ChannelSpec) -> float:
    """Effective diffusivity in a rectangular channel under flow (m^2/s).

    Reduces to D_0 when u = 0 and is nondecreasing in u.
    """
    h2 = spec.h_ch ** 2
    l2 = spec.l_ch ** 2
    corr = 8.5 * spec.u ** 2 * h2 * l2 / (210.0 * spec.D_0 ** 2 * (h2 + 2.4 * spec.h_ch * spec.l_ch + l2))
    return (1.0 + corr) * spec.D_0


def concentration_at(release: ReleaseEvent, spec: ChannelSpec, x, t: float):
    """Ligand concentration (molecules/m^3) at position x and time t > 0.

    Gaussian plug convected at velocity u; x may be an array.
    """
    if t <= 0:
        raise ValueError("concentration is defined for t > 0 only")
    D = effective_diffusion(spec)
    x = np.asarray(x, dtype=float)
    norm = release.N_m / (spec.A_ch * math.sqrt(4.0 * math.pi * D * t))
    prof = norm * np.exp(-((x - spec.u * t) ** 2) / (4.0 * D * t))
    return prof if prof.ndim else float(prof)


def peak_arrival_time(spec: ChannelSpec) -> float:
    """Time t_D = x_R / u at which the concentration peak passes the receiver."""
    if spec.u <= 0:
        raise ValueError("peak arrival time requires u > 0 (pure diffusion not supported)")
    return spec.x_R / spec.u


def received_concentration(release: ReleaseEvent, spec: ChannelSpec) -> float:
    """Peak concentration seen by the receiver, c(x_R, t_D) (molecules/m^3)."""
    t_d = peak_arrival_time(spec)
    D = effective_diffusion(spec)
    return release.N_m / (spec.A_ch * math.sqrt(4.0 * math.pi * D * t_d))
