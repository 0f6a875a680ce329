"""CODATA physical constants shared by the transduction and channel models."""

from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants (2018 CODATA exact values), SI units."""

    q: float = 1.602176634e-19     # elementary charge, C
    kB: float = 1.380649e-23       # Boltzmann constant, J/K
    N_A: float = 6.02214076e23     # Avogadro constant, 1/mol
    eps0: float = 8.8541878128e-12  # vacuum permittivity, F/m


CODATA = PhysicalConstants()
