"""Toeplitz ESPRIT spectral estimation with an FFT-backed eigensolver."""

from .errors import EspritKitError
from .esprit import EstimationResult, Solver, run
from .kernels import backend_name
from .signal_model import (
    NoiseKind,
    NoiseSpec,
    SpectralMeasure,
    matching_distance,
    new_measure,
    observe,
    synthesize,
)

__version__ = "0.1.0"

__all__ = [
    "EspritKitError",
    "EstimationResult",
    "NoiseKind",
    "NoiseSpec",
    "Solver",
    "SpectralMeasure",
    "backend_name",
    "matching_distance",
    "new_measure",
    "observe",
    "run",
    "synthesize",
]
