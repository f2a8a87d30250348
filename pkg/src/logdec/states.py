"""Initial wavefunctions on a grid: Gaussian, Lorentzian, sech, twin Gaussian.

Every constructor samples the shape and then renormalizes numerically, so
unit norm holds exactly on the discrete grid regardless of the analytic
prefactor. The shape, not the prefactor, is the physics.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .grid import Grid1D, quadrature

BOUNDARY_INTENSITY_WARN = 1e-12


@dataclass
class WaveState:
    """Complex marginal wavefunction a(x, t) sampled on a Grid1D."""

    psi: np.ndarray
    t: float
    grid: Grid1D

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.psi) ** 2

    def norm_squared(self) -> float:
        return quadrature(self.intensity, self.grid).real

    def copy(self) -> "WaveState":
        return WaveState(self.psi.copy(), self.t, self.grid)


def _normalized(shape: np.ndarray, grid: Grid1D, t: float = 0.0) -> WaveState:
    psi = shape.astype(np.complex128)
    psi /= np.sqrt(quadrature(np.abs(psi) ** 2, grid).real)
    return WaveState(psi, t, grid)


def gaussian(grid: Grid1D, b: float = 1.0, x0: float = 0.0) -> WaveState:
    """Gaussian a(x) ~ exp(-(x-x0)^2 / 4b^2); |a|^2 has standard deviation b."""
    if b <= 0:
        raise ValueError("width b must be positive")
    state = _normalized(np.exp(-((grid.x - x0) ** 2) / (4 * b**2)), grid)
    edge = max(state.intensity[0], state.intensity[-1])
    if edge > BOUNDARY_INTENSITY_WARN:
        warnings.warn(
            f"boundary intensity {edge:.2e} > {BOUNDARY_INTENSITY_WARN:.0e}: "
            "grid too narrow for this Gaussian, expect wrap-around",
            stacklevel=2,
        )
    return state


def lorentzian(grid: Grid1D, b: float = 1.0) -> WaveState:
    """Lorentzian a(x) ~ 1/(1 + (x/b)^2).

    b is half the FWHM of the shape, not a standard deviation (the second
    moment of a Lorentzian diverges; on a finite grid it is grid-dependent).
    """
    if b <= 0:
        raise ValueError("width b must be positive")
    return _normalized(1.0 / (1.0 + (grid.x / b) ** 2), grid)


def sech(grid: Grid1D, b: float = 1.0) -> WaveState:
    """Hyperbolic secant a(x) ~ sech(x/b)."""
    if b <= 0:
        raise ValueError("width b must be positive")
    return _normalized(1.0 / np.cosh(grid.x / b), grid)


def twin_gaussian(grid: Grid1D, b: float = 1.0, s: float = 1.0) -> WaveState:
    """Coherent superposition of two Gaussians of width b centered at +-s."""
    if b <= 0:
        raise ValueError("width b must be positive")
    if s < 0:
        raise ValueError("half-separation s must be non-negative")
    shape = np.exp(-((grid.x - s) ** 2) / (4 * b**2)) + np.exp(
        -((grid.x + s) ** 2) / (4 * b**2)
    )
    return _normalized(shape, grid)


def by_name(kind: str, grid: Grid1D, b: float = 1.0, s: float = 1.0,
            x0: float = 0.0) -> WaveState:
    """Constructor lookup used by the run configs."""
    if kind == "gaussian":
        return gaussian(grid, b=b, x0=x0)
    if kind == "lorentzian":
        return lorentzian(grid, b=b)
    if kind == "sech":
        return sech(grid, b=b)
    if kind == "twin_gaussian":
        return twin_gaussian(grid, b=b, s=s)
    raise ValueError(f"unknown initial state kind: {kind!r}")
