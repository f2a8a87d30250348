"""Periodic 1-D grid, its Fourier-dual wavenumber grid, and transform helpers.

Everything downstream (both propagators, all observables) integrates and
differentiates through this module, so the conventions are fixed here once:
unnormalized forward DFT, 1/N inverse (numpy's default), rectangle-rule
quadrature, grid centered on x = 0.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class Grid1D:
    """Uniform periodic grid of N points covering [-L/2, L/2).

    x[j] = -L/2 + j*dx and k holds the matching angular wavenumbers
    2*pi*m/L in standard DFT ordering, m in [-N/2, N/2).
    """

    length: float
    npoints: int
    dx: float = field(init=False)
    x: np.ndarray = field(init=False, repr=False)
    k: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError(f"grid length must be positive, got {self.length}")
        if self.npoints < 8:
            raise ValueError(f"need at least 8 points, got {self.npoints}")
        if self.npoints % 2 != 0:
            raise ValueError("N must be even (unique Nyquist mode)")
        dx = self.length / self.npoints
        object.__setattr__(self, "dx", dx)
        object.__setattr__(
            self, "x", -self.length / 2 + dx * np.arange(self.npoints)
        )
        object.__setattr__(
            self, "k", 2 * np.pi * np.fft.fftfreq(self.npoints, d=dx)
        )

    def compatible(self, other: "Grid1D") -> bool:
        return self.npoints == other.npoints and self.length == other.length


def make_grid(length: float, npoints: int) -> Grid1D:
    """Build a Grid1D; rejects odd N and non-positive L."""
    return Grid1D(float(length), int(npoints))


def quadrature(f: np.ndarray, grid: Grid1D) -> complex:
    """Rectangle-rule integral over one period, sum(f)*dx.

    On a periodic grid this coincides with the trapezoid rule and is exact
    for band-limited integrands.
    """
    f = np.asarray(f)
    if f.shape[-1] != grid.npoints:
        raise ValueError(f"expected {grid.npoints} samples, got {f.shape[-1]}")
    return f.sum(axis=-1) * grid.dx


def dft_forward(f: np.ndarray) -> np.ndarray:
    """Unnormalized forward DFT."""
    return np.fft.fft(f)


def dft_inverse(fhat: np.ndarray) -> np.ndarray:
    """Inverse DFT with the 1/N normalization (round trip is identity)."""
    return np.fft.ifft(fhat)


def spectral_derivative(f: np.ndarray, grid: Grid1D, order: int = 1) -> np.ndarray:
    """Differentiate by multiplying the spectrum with (ik)^order."""
    if len(f) != grid.npoints:
        raise ValueError(f"expected {grid.npoints} samples, got {len(f)}")
    return dft_inverse((1j * grid.k) ** order * dft_forward(f))
