"""Which-way information erasure in multi-coin quantum walks."""

__version__ = "0.1.0"

from .errors import CapacityError, DimensionError, ImpossibleOutcomeError, QWalkError
from .walk import (
    CoinInit,
    ProbabilityDistribution,
    WalkState,
    classical_distribution,
    dtqw_distribution,
    dtqw_evolve,
    hadamard_coin,
    path_sum_oracle,
    shift,
    std_dev,
    total_variation,
)
from .dicke import (
    DickeDiagonalState,
    FullMulticoinState,
    brute_force_mcqw,
    canonical_phi_T,
    compress,
    cyclic_shift,
    from_momentum,
    g_state,
    gamma_coefficients,
    momentum_amplitudes,
    spatial_marginal,
    to_momentum,
)
from .erasure import (
    DickeProjector,
    HadamardAmplitudes,
    complement_distribution,
    conditional_distribution,
    hadamard_amplitudes,
    hadamard_closed_form,
    pi_state,
    projector_from_target,
)
from .povm import (
    INCONCLUSIVE,
    MeasurementRecord,
    PovmSet,
    build_povm,
    g_tilde,
    optimal_eta,
    outcome_probabilities,
    post_measurement_distribution,
    sample_measurement,
    sample_outcomes,
    success_probability,
)
