"""Entanglement witnessing by lossy compression of qudits and Gaussian modes onto qubits."""
from .core import (
    BlochVector,
    DensityMatrix,
    PureState,
    bloch_vector,
    concurrence_2q,
    density_from_bloch,
    fidelity_pure,
    partial_trace,
    ppt_min_eigenvalue,
    purity,
    tensor,
)
from .gaussian import GaussianPair, GaussianSingle, ProjectionWidth
from .witness import CompressedPair, DegenerateProjectionError, WitnessReport

__version__ = "0.1.0"
