import numpy as np
import pytest

from biofetrx import ConcentrationPair
from biofetrx.experiments import scenario_from_mapping

# Independently hand-computed reference values for the default system
# parameters (frozen oracles; see individual tests for derivations).
C_M0 = 1.201080e17           # molecules/m^3, 1e3 molecules released
C_M1 = 6.005401e17           # molecules/m^3, 5e3 molecules released
D_EFF = 2.2065111759e-11     # m^2/s
T_PEAK = 100.0               # s
DEBYE = 1.7785257484e-9      # m
QEFF_RATIO = 0.3248061053    # q_eff / q
C_GATE = 1.9043681945e-12    # F
ZETA = 1.5612163313e-11      # A per bound receptor
SIGMA_F2_DEFAULT = 6.857933154e-23  # A^2 over the default band


@pytest.fixture(scope="session")
def default_scenario():
    return scenario_from_mapping({})


@pytest.fixture(scope="session")
def saturation_scenario():
    return scenario_from_mapping({"release": {"N_m0": 20000, "N_m1": 50000}})


@pytest.fixture(scope="session")
def default_params(default_scenario):
    return default_scenario.psd_params()


@pytest.fixture(scope="session")
def default_lam(default_scenario):
    return ConcentrationPair(c_m=default_scenario.received(1),
                             c_i=default_scenario.interferer().mu_ci)


@pytest.fixture
def rng():
    return np.random.default_rng(123456789)
