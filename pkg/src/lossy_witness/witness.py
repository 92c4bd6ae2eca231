"""Post-selected two-qubit outputs and the entanglement verdict built on them."""
from __future__ import annotations

from dataclasses import dataclass

from .core import DensityMatrix, PureState, concurrence_2q, partial_trace, ppt_min_eigenvalue, purity

ENTANGLED_TOL = 1e-8


class DegenerateProjectionError(ArithmeticError):
    """The post-selection succeeds with (numerically) zero probability."""


@dataclass(frozen=True)
class CompressedPair:
    state: PureState | DensityMatrix
    success_probability: float

    def __post_init__(self):
        if self.state.dims != (2, 2):
            raise ValueError(f"compressed output must be two qubits, got dims {self.state.dims}")
        if not 0 < self.success_probability <= 1 + 1e-12:
            raise ValueError(f"success probability {self.success_probability} outside (0, 1]")

    def density(self) -> DensityMatrix:
        if isinstance(self.state, PureState):
            return self.state.density()
        return self.state


@dataclass(frozen=True)
class WitnessReport:
    entangled: bool
    concurrence: float
    ppt_min_eig: float
    output_subsystem_purity: float
    success_probability: float


def witness_report(pair: CompressedPair) -> WitnessReport:
    rho = pair.density()
    c = concurrence_2q(rho)
    return WitnessReport(
        entangled=c > ENTANGLED_TOL,
        concurrence=c,
        ppt_min_eig=ppt_min_eigenvalue(rho, 1),
        output_subsystem_purity=purity(partial_trace(rho, [0])),
        success_probability=pair.success_probability,
    )
