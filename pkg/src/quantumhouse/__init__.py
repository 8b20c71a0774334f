"""Bipartite quantum-state toolkit and the quantum-house guessing game."""

from .linalg import (
    DensityMatrix,
    HermitianEigensystem,
    KrausChannel,
    MeasurementChannel,
    SwapWithPrepared,
    Unitary,
    apply_local,
    default_tol,
    density,
    eig_hermitian,
    partial_trace,
    product_density,
    pure_density,
    sample_random,
    set_default_tol,
    tensor,
    trace_distance,
    validate_density,
)
from .states import Ensemble, ensemble_eq2, ensemble_to_density, make, pseudo_pure
from .discord import (
    DiscordVerdict,
    correlation_blocks,
    is_zero_discord,
    measurement_perturbation,
    perturbation_search,
)
from .effect import (
    NoiseModel,
    NoisyQheReport,
    QhClass,
    QhWitness,
    WitnessKind,
    classify,
    construct_witness,
    impossibility_sweep,
    noisy_metrics,
    verify_witness,
    witness_from_unitary,
)
from .game import (
    ExtendedScore,
    FLAVORS,
    GameSession,
    STRATEGIES,
    expected_score_exact,
    new_session,
    simulate,
)

__version__ = "0.1.0"
