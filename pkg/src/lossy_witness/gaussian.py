"""Closed forms for compressing continuous-variable Gaussian states onto qubits.

The continuous CROT rotates the qubit by the position x itself,
|x>|0> -> |x>(cos x |0> + sin x |1>). Two-mode inputs are post-selected on a
product of width-Gamma Gaussians centred at the origin.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PAULI_X, PAULI_Z, DensityMatrix, PureState, bloch_vector
from .witness import CompressedPair, DegenerateProjectionError, WitnessReport, witness_report

MIN_SUCCESS_DENSITY = 1e-300
RECOVERY_BY_TOL = 1e-9


@dataclass(frozen=True)
class GaussianSingle:
    sigma: float
    m: float = 0.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class GaussianPair:
    """Two-mode state with width ``sigma`` along x1+x2 and ``Sigma`` along x1-x2."""

    sigma: float
    Sigma: float

    def __post_init__(self):
        if not (self.sigma > 0 and self.Sigma > 0):
            raise ValueError(f"sigma and Sigma must be positive, got {self.sigma}, {self.Sigma}")


@dataclass(frozen=True)
class ProjectionWidth:
    Gamma: float

    def __post_init__(self):
        if not self.Gamma > 0:
            raise ValueError(f"Gamma must be positive, got {self.Gamma}")


def sech2(x):
    """sech(x)**2 without overflow for large |x|."""
    e = np.exp(-2 * np.abs(x))
    return 4 * e / (1 + e) ** 2


def single_qubit_reduced(g: GaussianSingle) -> DensityMatrix:
    r = np.exp(-2 * g.sigma**2)
    m = 0.5 * (np.eye(2) + r * (np.cos(2 * g.m) * PAULI_Z + np.sin(2 * g.m) * PAULI_X))
    return DensityMatrix._unchecked((2,), m)


def recover_params(rho_B: DensityMatrix) -> GaussianSingle:
    """Invert ``single_qubit_reduced``; m comes back folded into [0, pi)."""
    b = bloch_vector(rho_B)
    if abs(b.by) >= RECOVERY_BY_TOL:
        raise ValueError(f"Bloch vector has b_y = {b.by:.3e}; not the output of a Gaussian coupling")
    norm2 = b.bx**2 + b.bz**2
    if norm2 == 0:
        raise ValueError("Bloch vector has zero length; the width is unrecoverable")
    if norm2 >= 1:
        raise ValueError("Bloch vector has unit length; the width is below double precision")
    sigma = np.sqrt(-0.25 * np.log(norm2))
    m = (0.5 * np.arctan2(b.bx, b.bz)) % np.pi
    return GaussianSingle(float(sigma), float(m))


def _log_overlaps(g: GaussianPair, w: ProjectionWidth) -> tuple[float, float]:
    """Exponents -2 s^2 G^2 / (s^2 + G^2) for s = sigma and s = Sigma."""
    G2 = w.Gamma**2
    e_sigma = -2 * g.sigma**2 * G2 / (g.sigma**2 + G2)
    e_Sigma = -2 * g.Sigma**2 * G2 / (g.Sigma**2 + G2)
    return e_sigma, e_Sigma


def _prefactor(g: GaussianPair, w: ProjectionWidth) -> float:
    G2 = w.Gamma**2
    return float(np.sqrt(g.sigma * g.Sigma * G2 / ((g.sigma**2 + G2) * (g.Sigma**2 + G2))))


def _exponent_gap(g: GaussianPair, w: ProjectionWidth) -> float:
    """2 G^4 (sigma - Sigma)(sigma + Sigma) / ((sigma^2 + G^2)(Sigma^2 + G^2))."""
    G2 = w.Gamma**2
    return 2 * G2**2 * (g.sigma - g.Sigma) * (g.sigma + g.Sigma) / ((g.sigma**2 + G2) * (g.Sigma**2 + G2))


def pair_amplitudes(g: GaussianPair, w: ProjectionWidth) -> tuple[float, float]:
    """Projected |00> and |11> amplitudes (a_plus, a_minus).

    a_minus > 0 iff sigma > Sigma. These are absolute amplitudes for the
    normalized Gaussian projector, so a_plus**2 + a_minus**2 is the
    post-selection probability density.
    """
    e_sigma, e_Sigma = _log_overlaps(g, w)
    pre = _prefactor(g, w)
    a_plus = pre * (np.exp(e_sigma) + np.exp(e_Sigma))
    # e^S - e^s = e^s expm1(S - s) keeps precision when sigma ~ Sigma
    a_minus = pre * np.exp(e_Sigma) * -np.expm1(e_sigma - e_Sigma)
    return float(a_plus), float(a_minus)


def two_qubit_state(g: GaussianPair, w: ProjectionWidth) -> CompressedPair:
    a_plus, a_minus = pair_amplitudes(g, w)
    prob = a_plus**2 + a_minus**2
    if prob < MIN_SUCCESS_DENSITY:
        raise DegenerateProjectionError(f"post-selection density {prob:.3e} underflows")
    # a_minus / a_plus = tanh(gap / 2), independent of the common scale
    r = np.tanh(0.5 * _exponent_gap(g, w))
    amps = np.zeros(4)
    amps[0], amps[3] = 1.0, r
    return CompressedPair(PureState.normalized((2, 2), amps), float(min(prob, 1.0)))


def purity_input(g: GaussianPair) -> float:
    return float(2 * g.sigma * g.Sigma / (g.sigma**2 + g.Sigma**2))


def purity_output(g: GaussianPair, w: ProjectionWidth) -> float:
    return float(0.5 * (sech2(_exponent_gap(g, w)) + 1))


def purity_output_limit(g: GaussianPair) -> float:
    return float(0.5 * (sech2(2 * (g.sigma - g.Sigma) * (g.sigma + g.Sigma)) + 1))


def purity_extreme(w: ProjectionWidth) -> float:
    """Output purity as sigma - Sigma grows without bound."""
    return float(0.5 * (sech2(2 * w.Gamma**2) + 1))


def witness_gaussian(g: GaussianPair, w: ProjectionWidth) -> WitnessReport:
    return witness_report(two_qubit_state(g, w))
