"""Qudit-to-qubit compression by controlled y-rotations.

A qudit in basis state |j> rotates its target qubit by the angle
xi_j = j pi / (2 (d - 1)), so |0> leaves the qubit alone and |d-1> flips it.
For a pair, each qudit drives its own qubit and the qudits are then
post-selected on |+>|+>, with |+> the uniform superposition.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np
from scipy.special import gammaln, xlogy

from .core import DensityMatrix, PureState, fidelity_pure, partial_trace
from .random_states import maximally_entangled
from .witness import CompressedPair, DegenerateProjectionError, WitnessReport, witness_report

MIN_SUCCESS_PROBABILITY = 1e-14


@dataclass(frozen=True)
class CrotAngles:
    d: int
    xi: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ValueError(f"qudit dimension must be an integer >= 2, got {self.d}")
        object.__setattr__(self, "d", int(self.d))
        xi = np.arange(self.d) * np.pi / (2 * (self.d - 1))
        xi.setflags(write=False)
        object.__setattr__(self, "xi", xi)

    def rotation_columns(self) -> np.ndarray:
        """(d, 2) matrix whose row j is (cos xi_j, sin xi_j)."""
        return np.stack([np.cos(self.xi), np.sin(self.xi)], axis=1)


@dataclass(frozen=True)
class BernoulliParams:
    d: int
    p: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ValueError(f"qudit dimension must be an integer >= 2, got {self.d}")
        if not 0 <= self.p <= 1:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")


def crot_unitary(angles: CrotAngles) -> np.ndarray:
    """Block-diagonal sum_j |j><j| (x) exp(-i sigma_y xi_j), qudit factor first."""
    d = angles.d
    u = np.zeros((2 * d, 2 * d), dtype=complex)
    c, s = np.cos(angles.xi), np.sin(angles.xi)
    idx = 2 * np.arange(d)
    u[idx, idx] = c
    u[idx, idx + 1] = -s
    u[idx + 1, idx] = s
    u[idx + 1, idx + 1] = c
    return u


def bernoulli_state(params: BernoulliParams) -> PureState:
    n = params.d - 1
    k = np.arange(params.d)
    # log-space binomial weights stay finite for d in the thousands
    log_w = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1) + xlogy(k, params.p) + xlogy(n - k, 1 - params.p)
    amps = np.exp(0.5 * log_w)
    return PureState.normalized([params.d], amps)


def plus_state(d: int) -> PureState:
    if d < 2:
        raise ValueError(f"qudit dimension must be >= 2, got {d}")
    return PureState([d], np.full(d, 1 / np.sqrt(d)))


def compress_single(psi_A: PureState) -> DensityMatrix:
    """Couple a qudit to a qubit in |0> and return the qubit's reduced state."""
    if len(psi_A.dims) != 1:
        raise ValueError(f"expected a single qudit, got dims {psi_A.dims}")
    d = psi_A.dims[0]
    if d < 2:
        raise ValueError(f"qudit dimension must be >= 2, got {d}")
    cols = CrotAngles(d).rotation_columns()
    # U (psi x |0>) without forming the 2d x 2d unitary
    joint = psi_A.amplitudes[:, None] * cols
    joint_state = PureState((d, 2), joint.reshape(-1) / np.linalg.norm(joint))
    return partial_trace(joint_state, [1])


def estimate_p(rho_B: DensityMatrix, d: int | None = None) -> float:
    """Bernoulli parameter from <sigma_z>; exact only as d grows without bound."""
    if rho_B.dims != (2,):
        raise ValueError(f"expected a single qubit, got dims {rho_B.dims}")
    if d is not None and d < 2:
        raise ValueError(f"qudit dimension must be >= 2, got {d}")
    z = float((rho_B.matrix[0, 0] - rho_B.matrix[1, 1]).real)
    return float(np.arccos(np.clip(z, -1.0, 1.0)) / np.pi)


def _check_pair_dims(dims: tuple[int, ...]) -> int:
    if len(dims) != 2 or dims[0] != dims[1]:
        raise ValueError(f"expected two qudits of equal dimension, got dims {dims}")
    return dims[0]


def compress_pair_pure(psi_AA: PureState) -> CompressedPair:
    """Pairwise CROT onto |00>, then post-select the qudits on |++>.

    The projected qubit amplitudes are b_mn = (1/d) sum_jl a_jl c^m_j c^n_l
    with c^0_j = cos xi_j and c^1_j = sin xi_j.
    """
    d = _check_pair_dims(psi_AA.dims)
    cols = CrotAngles(d).rotation_columns()
    b = cols.T @ psi_AA.amplitudes.reshape(d, d) @ cols / d
    prob = float(np.sum(np.abs(b) ** 2))
    if prob < MIN_SUCCESS_PROBABILITY:
        raise DegenerateProjectionError(f"post-selection probability {prob:.3e} is below {MIN_SUCCESS_PROBABILITY}")
    return CompressedPair(PureState((2, 2), b.reshape(-1) / np.sqrt(prob)), prob)


def compress_pair_mixed(rho_AA: DensityMatrix) -> CompressedPair:
    """Mixed-state version: out[mn, pq] = sum rho[ik, jl] c^m_i c^n_k c^p_j c^q_l / d^2."""
    d = _check_pair_dims(rho_AA.dims)
    cols = CrotAngles(d).rotation_columns()
    r = rho_AA.matrix.reshape(d, d, d, d)
    out = np.einsum("ikjl,im,kn,jp,lq->mnpq", r, cols, cols, cols, cols, optimize=True) / d**2
    out = out.reshape(4, 4)
    prob = float(np.trace(out).real)
    if prob < MIN_SUCCESS_PROBABILITY:
        raise DegenerateProjectionError(f"post-selection probability {prob:.3e} is below {MIN_SUCCESS_PROBABILITY}")
    out = 0.5 * (out + out.conj().T) / prob
    return CompressedPair(DensityMatrix._unchecked((2, 2), out), prob)


def _pair_projector(d: int) -> np.ndarray:
    """<+| (x) 1_2 on each qudit-qubit pair, ordered [A1, B1, A2, B2] -> [B1, B2]."""
    single = np.kron(plus_state(d).amplitudes.conj()[None, :], np.eye(2))
    return np.kron(single, single)


def _to_interleaved(amps: np.ndarray, d: int) -> np.ndarray:
    """psi_AA (x) |00>_B as a (2d, 2d) array indexed [(A1 B1), (A2 B2)]."""
    t = np.zeros((d, 2, d, 2), dtype=complex)
    t[:, 0, :, 0] = amps.reshape(d, d)
    return t.reshape(2 * d, 2 * d)


def simulate_pair_pure(psi_AA: PureState) -> CompressedPair:
    """Brute-force route: explicit CROT unitaries and explicit projector."""
    d = _check_pair_dims(psi_AA.dims)
    u = crot_unitary(CrotAngles(d))
    joint = u @ _to_interleaved(psi_AA.amplitudes, d) @ u.T
    t = joint.reshape(d, 2, d, 2)
    plus = plus_state(d).amplitudes.conj()
    b = np.einsum("a,c,abcd->bd", plus, plus, t)
    prob = float(np.sum(np.abs(b) ** 2))
    if prob < MIN_SUCCESS_PROBABILITY:
        raise DegenerateProjectionError(f"post-selection probability {prob:.3e} is below {MIN_SUCCESS_PROBABILITY}")
    return CompressedPair(PureState((2, 2), b.reshape(-1) / np.sqrt(prob)), prob)


def simulate_pair_mixed(rho_AA: DensityMatrix) -> CompressedPair:
    """Brute-force route for mixed inputs; dense in (2d)^2, keep d small."""
    d = _check_pair_dims(rho_AA.dims)
    u = crot_unitary(CrotAngles(d))
    v = np.kron(u, u)
    # reorder [A1, A2, B1, B2] -> [A1, B1, A2, B2]
    zero = np.zeros((4, 4))
    zero[0, 0] = 1.0
    side = 4 * d * d
    full = np.kron(rho_AA.matrix, zero).reshape([d, d, 2, 2] * 2)
    full = full.transpose(0, 2, 1, 3, 4, 6, 5, 7).reshape(side, side)
    evolved = v @ full @ v.conj().T
    k = _pair_projector(d)
    out = k @ evolved @ k.conj().T
    prob = float(np.trace(out).real)
    if prob < MIN_SUCCESS_PROBABILITY:
        raise DegenerateProjectionError(f"post-selection probability {prob:.3e} is below {MIN_SUCCESS_PROBABILITY}")
    out = 0.5 * (out + out.conj().T) / prob
    return CompressedPair(DensityMatrix._unchecked((2, 2), out), prob)


def witness_qudit_pair(rho_AA) -> WitnessReport:
    if isinstance(rho_AA, PureState):
        return witness_report(compress_pair_pure(rho_AA))
    return witness_report(compress_pair_mixed(rho_AA))


BELL_ASYMPTOTE = np.pi**2 / (np.pi**2 + 4)


def bell_overlap(d: int) -> float:
    """Overlap of the compressed maximally entangled qudit pair with (|00>+|11>)/sqrt 2.

    For a_jl = delta_jl / sqrt(d) the projected amplitudes are proportional to
    b00 = S_c, b01 = b10 = S_cs, b11 = S_s with
    S_c = sum_j cos^2 xi_j, S_cs = sum_j cos xi_j sin xi_j, S_s = sum_j sin^2 xi_j
    (the common 1/(d sqrt d) factor cancels on normalization).
    """
    cols = CrotAngles(d).rotation_columns()
    c, s = cols[:, 0], cols[:, 1]
    s_c, s_cs, s_s = np.dot(c, c), np.dot(c, s), np.dot(s, s)
    return float((s_c + s_s) ** 2 / (2 * (s_c**2 + 2 * s_cs**2 + s_s**2)))


def bell_overlap_matrix(d: int) -> float:
    """Same quantity by explicit simulation; cost grows as d^3."""
    out = simulate_pair_pure(maximally_entangled(d))
    return fidelity_pure(out.state, maximally_entangled(2))


def multiqubit_relabel(psi: PureState) -> PureState:
    """View an n-qubit register as one qudit of dimension 2**n (big-endian)."""
    if any(d != 2 for d in psi.dims):
        raise ValueError(f"all factors must be qubits, got dims {psi.dims}")
    return PureState((prod(psi.dims),), psi.amplitudes)
