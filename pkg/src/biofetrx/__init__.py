"""Simulation, spectral estimation, and detection for bioFET molecular-communication receivers."""

__version__ = "0.1.0"

from .channel import ChannelSpec, ReleaseEvent, concentration_at, effective_diffusion, \
    peak_arrival_time, received_concentration
from .kinetics import (ConcentrationPair, EquilibriumState, InterfererModel,
                       LigandKinetics, ReceptorTrace, bound_probability,
                       draw_interferer, equilibrium_probabilities, gamma_matrix,
                       generator_matrix, omega_matrix, sample_bound_count,
                       simulate_trace)
from .transduction import (ReceiverSpec, debye_length, effective_charge, flicker_psd,
                           flicker_variance, gain, gate_capacitance, synthesize_flicker,
                           transducer_gain)
from .spectral import (Periodogram, PsdModelParams, binding_psd,
                       characteristic_frequencies, no_interference_psd, periodogram,
                       sample_frequencies, total_psd)
from .estimation import (FisherMatrix, WhittleFit, estimator_variance, fisher_matrix,
                         ml_estimate, whittle_neg_log_lik)
from .detection import (DecisionThreshold, GaussianStats, fdd_asymptotic_variances,
                        fdd_bep, fdd_decide, fdd_threshold, ml_threshold, tdd_bep,
                        tdd_decide, tdd_output_stats, whittle_variance_single)
