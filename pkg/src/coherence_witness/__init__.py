"""Stringent coherence witnesses, the l1-norm of coherence and incoherent-unitary activation."""
from .activation import (
    ActivationResult,
    IncoherentUnitary,
    OptimizerConfig,
    apply,
    game_payoff,
    grid_maximize,
    matching_condition,
    maximize_mean,
    objective_closed_form,
)
from .detection import DetectionTranscript, detect, detection_statistics
from .gellmann import BlochDecomposition, GellMannBasis, build_basis, decompose, reconstruct
from .states import DensityMatrix, is_incoherent, l1_coherence, random_state, validate
from .witness import (
    NormalizedWitness,
    Witness,
    coherence_lower_bound,
    construct_for_state,
    from_matrix,
    mean_value,
    optimal_witness,
)

__version__ = "0.1.0"
