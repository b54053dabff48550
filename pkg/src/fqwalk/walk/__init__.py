"""
Walk dynamics - time evolution, scattering matrices and stationary states.
"""

from .dynamics import (
    ArcState,
    EvolutionOperator,
    EvolutionResult,
    evolve,
    fixed_point_solve,
    key_lemma_residual,
    step,
)
from .scattering import (
    DetectionResult,
    ScatteringMatrix,
    detect_embedding,
    scattering_block,
    scattering_matrix,
    series_block,
)
from .stationary import (
    FacialFunction,
    StationaryDecomposition,
    external_facial_function,
    gram_matrix,
    internal_facial_function,
    luminous_faces,
    stationary_state,
)

__all__ = [
    "ArcState",
    "EvolutionOperator",
    "EvolutionResult",
    "step",
    "evolve",
    "fixed_point_solve",
    "key_lemma_residual",
    "ScatteringMatrix",
    "DetectionResult",
    "scattering_block",
    "series_block",
    "scattering_matrix",
    "detect_embedding",
    "FacialFunction",
    "StationaryDecomposition",
    "internal_facial_function",
    "external_facial_function",
    "gram_matrix",
    "stationary_state",
    "luminous_faces",
]
