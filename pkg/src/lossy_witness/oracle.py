"""Quadrature route for the continuous-variable closed forms.

Wavefunctions are sampled on a uniform position grid and every integral is a
trapezoidal sum. Nothing here calls into ``gaussian``'s closed forms, so the
two routes can be compared against each other.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .core import DensityMatrix, PureState
from .gaussian import GaussianPair, GaussianSingle, ProjectionWidth
from .witness import CompressedPair, DegenerateProjectionError, WitnessReport, witness_report

MAX_POINTS = 2**20
EXTENT_SIGMAS = 8.0
OSCILLATION_STEP = 2 * np.pi / 20


class GridTooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError(f"empty grid [{self.x_min}, {self.x_max}]")
        if self.n < 16:
            raise ValueError(f"grid needs at least 16 points, got {self.n}")
        if self.n > MAX_POINTS:
            raise GridTooLargeError(f"{self.n} grid points exceed the cap of {MAX_POINTS}")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @cached_property
    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n)

    @cached_property
    def weights(self) -> np.ndarray:
        w = np.full(self.n, self.spacing)
        w[0] = w[-1] = 0.5 * self.spacing
        return w


def make_grid(
    sigma_max: float,
    m_abs_max: float,
    points_per_sigma: int,
    sigma_min: float | None = None,
    extent_sigmas: float = EXTENT_SIGMAS,
) -> Grid:
    """Symmetric grid covering |x| <= m_abs_max + extent_sigmas * sigma_max.

    The step resolves the narrowest width (``sigma_min``, default
    ``sigma_max``) with ``points_per_sigma`` points and never exceeds
    2 pi / 20, so cos x and sin x get at least 20 points per period.
    """
    if sigma_max <= 0 or m_abs_max < 0 or points_per_sigma <= 0:
        raise ValueError("grid parameters must be positive")
    sigma_min = sigma_max if sigma_min is None else sigma_min
    half = m_abs_max + extent_sigmas * sigma_max
    step = min(sigma_min / points_per_sigma, OSCILLATION_STEP)
    n = int(np.ceil(2 * half / step)) + 1
    if n > MAX_POINTS:
        raise GridTooLargeError(f"{n} grid points exceed the cap of {MAX_POINTS}")
    return Grid(-half, half, max(n, 16))


def grid_for_single(g: GaussianSingle, points_per_sigma: int = 4) -> Grid:
    return make_grid(g.sigma, abs(g.m), points_per_sigma)


def grid_for_pair(g: GaussianPair, w: ProjectionWidth, points_per_sigma: int = 4) -> Grid:
    # the projector only narrows the integrand, so its width sets resolution, not extent
    return make_grid(max(g.sigma, g.Sigma), 0.0, points_per_sigma, sigma_min=min(g.sigma, g.Sigma, w.Gamma))


@dataclass(frozen=True, eq=False)
class DiscretizedWavefunction:
    """Samples on ``grid`` (one mode) or on grid x grid (two modes, values of shape (n, n))."""

    grid: Grid
    values: np.ndarray

    def norm(self) -> float:
        w = self.grid.weights
        p = np.abs(self.values) ** 2
        if p.ndim == 1:
            return float(np.sqrt(w @ p))
        return float(np.sqrt(w @ p @ w))

    def normalized(self) -> "DiscretizedWavefunction":
        return DiscretizedWavefunction(self.grid, self.values / self.norm())


def sample_single(g: GaussianSingle, grid: Grid) -> DiscretizedWavefunction:
    x = grid.points
    psi = (2 * np.pi * g.sigma**2) ** -0.25 * np.exp(-((x - g.m) ** 2) / (4 * g.sigma**2))
    return DiscretizedWavefunction(grid, psi.astype(complex))


def sample_pair(g: GaussianPair, grid: Grid) -> DiscretizedWavefunction:
    x1 = grid.points[:, None]
    x2 = grid.points[None, :]
    psi = (2 * np.pi * g.sigma * g.Sigma) ** -0.5 * np.exp(
        -((x1 + x2) ** 2) / (8 * g.sigma**2) - (x1 - x2) ** 2 / (8 * g.Sigma**2)
    )
    return DiscretizedWavefunction(grid, psi.astype(complex))


def oracle_single_reduced(g: GaussianSingle, grid: Grid) -> DensityMatrix:
    psi = sample_single(g, grid).normalized()
    x = grid.points
    p = grid.weights * np.abs(psi.values) ** 2
    c, s = np.cos(x), np.sin(x)
    cc, cs, ss = p @ (c * c), p @ (c * s), p @ (s * s)
    return DensityMatrix._unchecked((2,), np.array([[cc, cs], [cs, ss]], dtype=complex))


def oracle_pair_amplitudes(g: GaussianPair, w: ProjectionWidth, grid: Grid) -> np.ndarray:
    """2x2 array b[m, n] of projected qubit amplitudes |mn>, absolute scale."""
    if grid.n**2 > MAX_POINTS:
        raise GridTooLargeError(f"{grid.n}^2 two-mode points exceed the cap of {MAX_POINTS}")
    psi = sample_pair(g, grid).normalized().values
    x = grid.points
    proj = (2 * np.pi * w.Gamma**2) ** -0.25 * np.exp(-(x**2) / (4 * w.Gamma**2))
    f = (grid.weights * proj)[:, None] * np.stack([np.cos(x), np.sin(x)], axis=1)
    # iterated 1-D trapezoid sums in x2 then x1
    return f.T @ psi @ f


def oracle_pair_compress(g: GaussianPair, w: ProjectionWidth, grid: Grid) -> CompressedPair:
    b = oracle_pair_amplitudes(g, w, grid)
    prob = float(np.sum(np.abs(b) ** 2))
    if prob < 1e-300:
        raise DegenerateProjectionError(f"post-selection density {prob:.3e} underflows")
    return CompressedPair(PureState.normalized((2, 2), b.reshape(-1)), min(prob, 1.0))


def oracle_witness(g: GaussianPair, w: ProjectionWidth, grid: Grid | None = None) -> WitnessReport:
    grid = grid_for_pair(g, w) if grid is None else grid
    return witness_report(oracle_pair_compress(g, w, grid))


def compare_reports(analytic: WitnessReport, numeric: WitnessReport) -> float:
    return max(
        abs(analytic.concurrence - numeric.concurrence),
        abs(analytic.ppt_min_eig - numeric.ppt_min_eig),
        abs(analytic.output_subsystem_purity - numeric.output_subsystem_purity),
    )
