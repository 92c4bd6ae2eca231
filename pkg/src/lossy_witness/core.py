"""Dense state containers and two-qubit entanglement quantifiers.

Conventions: subsystems are indexed from 0 with the leftmost tensor factor
first, and multi-indices are flattened row-major (big-endian), so that
``np.kron`` of the factors gives the joint amplitude vector.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np

ATOL = 1e-12
PSD_TOL = -1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_YY = np.kron(PAULI_Y, PAULI_Y)


def _as_dims(dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 2 for d in dims):
        raise ValueError(f"every subsystem dimension must be >= 2, got {dims}")
    return dims


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over the product basis of ``dims``."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = _as_dims(self.dims)
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != prod(dims):
            raise ValueError(f"{amps.size} amplitudes do not match dims {dims}")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > ATOL:
            raise ValueError(f"state is not normalized (squared norm {norm2!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, dims: Sequence[int], amplitudes) -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(dims, amps / norm)

    @classmethod
    def basis(cls, dims: Sequence[int], index: int | Sequence[int]) -> "PureState":
        """Computational basis state; ``index`` is flat or a multi-index."""
        dims = _as_dims(dims)
        if not isinstance(index, (int, np.integer)):
            index = int(np.ravel_multi_index(tuple(index), dims))
        amps = np.zeros(prod(dims), dtype=complex)
        amps[index] = 1.0
        return cls(dims, amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> "DensityMatrix":
        return DensityMatrix._unchecked(self.dims, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix over ``dims``."""

    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims = _as_dims(self.dims)
        mat = np.array(self.matrix, dtype=complex)
        side = prod(dims)
        if mat.shape != (side, side):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {dims}")
        herm_dev = float(np.max(np.abs(mat - mat.conj().T)))
        if herm_dev > ATOL:
            raise ValueError(f"matrix is not Hermitian (max deviation {herm_dev:.3e})")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > ATOL:
            raise ValueError(f"trace is {tr}, expected 1")
        lo = float(np.linalg.eigvalsh(mat).min())
        if lo < PSD_TOL:
            raise ValueError(f"matrix is not positive semidefinite (eigenvalue {lo:.3e})")
        mat.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def _unchecked(cls, dims: Sequence[int], matrix: np.ndarray) -> "DensityMatrix":
        # For outputs of operations that preserve the invariants by construction.
        obj = object.__new__(cls)
        mat = np.array(matrix, dtype=complex)
        mat.setflags(write=False)
        object.__setattr__(obj, "dims", tuple(int(d) for d in dims))
        object.__setattr__(obj, "matrix", mat)
        return obj

    @classmethod
    def from_unnormalized(cls, dims: Sequence[int], matrix) -> "DensityMatrix":
        mat = np.asarray(matrix, dtype=complex)
        mat = 0.5 * (mat + mat.conj().T)
        return cls(dims, mat / np.trace(mat).real)

    @classmethod
    def maximally_mixed(cls, dims: Sequence[int]) -> "DensityMatrix":
        dims = _as_dims(dims)
        side = prod(dims)
        return cls(dims, np.eye(side) / side)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class BlochVector:
    bx: float
    by: float
    bz: float

    def __post_init__(self):
        if self.norm > 1 + ATOL:
            raise ValueError(f"Bloch vector norm {self.norm} exceeds 1")

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.bx**2 + self.by**2 + self.bz**2))

    def as_array(self) -> np.ndarray:
        return np.array([self.bx, self.by, self.bz])


def tensor(a, b):
    """Kronecker product of two states of the same kind."""
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(a.dims + b.dims, np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix._unchecked(a.dims + b.dims, np.kron(a.matrix, b.matrix))
    raise TypeError(f"cannot tensor {type(a).__name__} with {type(b).__name__}")


def _check_subsystems(dims: tuple[int, ...], indices) -> list[int]:
    out = []
    for k in indices:
        k = int(k)
        if not 0 <= k < len(dims):
            raise ValueError(f"subsystem index {k} out of range for dims {dims}")
        out.append(k)
    return out


def partial_trace(rho, keep) -> DensityMatrix:
    """Reduce onto the subsystems in ``keep``; they stay in their original order.

    Accepts a ``PureState`` as well, treated as its projector.
    """
    if isinstance(rho, PureState):
        rho = rho.density()
    dims = rho.dims
    keep = sorted(set(_check_subsystems(dims, keep)))
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    n = len(dims)
    traced = [k for k in range(n) if k not in keep]
    t = rho.matrix.reshape(dims + dims)
    # bra axes of traced subsystems are paired with their ket axes
    in_ket = list(range(n))
    in_bra = [n + k if k in keep else k for k in range(n)]
    out = keep + [n + k for k in keep]
    reduced = np.einsum(t, in_ket + in_bra, out)
    kept_dims = tuple(dims[k] for k in keep)
    side = prod(kept_dims)
    return DensityMatrix._unchecked(kept_dims, reduced.reshape(side, side))


def partial_transpose(rho: DensityMatrix, subsystem: int) -> np.ndarray:
    dims = rho.dims
    (k,) = _check_subsystems(dims, [subsystem])
    n = len(dims)
    t = rho.matrix.reshape(dims + dims)
    axes = list(range(2 * n))
    axes[k], axes[n + k] = axes[n + k], axes[k]
    side = prod(dims)
    return t.transpose(axes).reshape(side, side)


def purity(rho) -> float:
    if isinstance(rho, PureState):
        return 1.0
    m = rho.matrix
    # Tr(rho^2) for Hermitian rho is the squared Frobenius norm
    return float(np.sum(np.abs(m) ** 2))


def fidelity_pure(psi: PureState, phi: PureState) -> float:
    if psi.dim != phi.dim:
        raise ValueError(f"dimension mismatch: {psi.dim} vs {phi.dim}")
    return float(abs(np.vdot(psi.amplitudes, phi.amplitudes)) ** 2)


def trace_distance(a: DensityMatrix, b: DensityMatrix) -> float:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    diff = a.matrix - b.matrix
    return float(0.5 * np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))).sum())


def _require_two_qubits(rho: DensityMatrix) -> None:
    if rho.dims != (2, 2):
        raise ValueError(f"expected a two-qubit state with dims (2, 2), got {rho.dims}")


def wootters_lambdas(rho: DensityMatrix) -> np.ndarray:
    """Decreasing square roots of the spectrum of sqrt(rho) rho~ sqrt(rho).

    With rho = W W^dagger these are the singular values of W^T (Y x Y) W,
    which avoids taking square roots of near-zero eigenvalues of a product
    matrix.
    """
    _require_two_qubits(rho)
    m = rho.matrix
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    cutoff = 16 * np.finfo(float).eps * max(1.0, float(w.max()))
    mask = w > cutoff
    factor = v[:, mask] * np.sqrt(w[mask])
    tau = factor.T @ _YY @ factor
    lam = np.zeros(4)
    sv = np.linalg.svd(tau, compute_uv=False) if tau.size else np.zeros(0)
    lam[: sv.size] = sv
    return np.sort(lam)[::-1]


def concurrence_2q(rho) -> float:
    if isinstance(rho, PureState):
        rho = rho.density()
    lam = wootters_lambdas(rho)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def ppt_min_eigenvalue(rho: DensityMatrix, transpose_subsystem: int = 1) -> float:
    if len(rho.dims) != 2:
        raise ValueError(f"partial-transpose test needs exactly two subsystems, got dims {rho.dims}")
    pt = partial_transpose(rho, transpose_subsystem)
    return float(np.linalg.eigvalsh(0.5 * (pt + pt.conj().T)).min())


def bloch_vector(rho: DensityMatrix) -> BlochVector:
    if rho.dims != (2,):
        raise ValueError(f"expected a single qubit, got dims {rho.dims}")
    m = rho.matrix
    return BlochVector(
        float(np.trace(m @ PAULI_X).real),
        float(np.trace(m @ PAULI_Y).real),
        float(np.trace(m @ PAULI_Z).real),
    )


def density_from_bloch(b: BlochVector) -> DensityMatrix:
    m = 0.5 * (np.eye(2) + b.bx * PAULI_X + b.by * PAULI_Y + b.bz * PAULI_Z)
    return DensityMatrix._unchecked((2,), m)


def schmidt_coefficients(psi: PureState) -> np.ndarray:
    """Singular values of the amplitude matrix of a bipartite pure state."""
    if len(psi.dims) != 2:
        raise ValueError(f"Schmidt decomposition needs two subsystems, got dims {psi.dims}")
    return np.linalg.svd(psi.amplitudes.reshape(psi.dims), compute_uv=False)
