"""Seeded random ensembles used by the property tests and the witness sweeps."""
from __future__ import annotations

from math import prod
from typing import Sequence

import numpy as np

from .core import DensityMatrix, PureState


def haar_pure(rng: np.random.Generator, dims: Sequence[int]) -> PureState:
    n = prod(dims)
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return PureState.normalized(dims, z)


def hilbert_schmidt_mixed(rng: np.random.Generator, dims: Sequence[int], rank: int | None = None) -> DensityMatrix:
    """Induced-measure mixed state, G G^dagger / Tr for a complex Ginibre G."""
    n = prod(dims)
    rank = n if rank is None else rank
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    return DensityMatrix.from_unnormalized(dims, g @ g.conj().T)


def product_pure(rng: np.random.Generator, d1: int, d2: int) -> tuple[PureState, PureState, PureState]:
    """Returns (joint, factor1, factor2)."""
    a = haar_pure(rng, [d1])
    b = haar_pure(rng, [d2])
    return PureState((d1, d2), np.kron(a.amplitudes, b.amplitudes)), a, b


def random_separable(rng: np.random.Generator, d1: int, d2: int, max_terms: int = 5) -> DensityMatrix:
    """Dirichlet-weighted mixture of 1..max_terms Haar-random pure product states."""
    k = int(rng.integers(1, max_terms + 1))
    weights = rng.dirichlet(np.ones(k))
    mat = np.zeros((d1 * d2, d1 * d2), dtype=complex)
    for w in weights:
        psi, _, _ = product_pure(rng, d1, d2)
        mat += w * np.outer(psi.amplitudes, psi.amplitudes.conj())
    return DensityMatrix.from_unnormalized((d1, d2), mat)


def maximally_entangled(d: int) -> PureState:
    amps = np.zeros(d * d, dtype=complex)
    amps[:: d + 1] = 1 / np.sqrt(d)
    return PureState((d, d), amps)


def isotropic(d: int, p: float) -> DensityMatrix:
    """p |Phi_d><Phi_d| + (1 - p) 1/d^2; entangled iff p > 1/(d + 1)."""
    if not 0 <= p <= 1:
        raise ValueError(f"mixing weight must lie in [0, 1], got {p}")
    phi = maximally_entangled(d).amplitudes
    mat = p * np.outer(phi, phi.conj()) + (1 - p) * np.eye(d * d) / d**2
    return DensityMatrix.from_unnormalized((d, d), mat)
