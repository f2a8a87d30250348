"""Diagnostics shared by both propagators.

Ensemble width, coherence length, kinetic energy, fringe visibility, zero
locations, and the relative L2 distance between a density matrix and a
wavefunction's outer product. All functions are pure; the ObservableSeries
container collects per-record values and renders the series CSV.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import Grid1D, quadrature, dft_forward
from .states import WaveState

SERIES_COLUMNS = (
    "t", "width", "coherence_length", "norm", "kinetic_energy",
    "visibility", "rel_l2_error",
)


@dataclass
class ObservableRecord:
    t: float
    width: float = math.nan
    coherence_length: float = math.nan
    norm: float = math.nan            # wavefunction norm or density trace
    kinetic_energy: float = math.nan
    visibility: float = math.nan
    rel_l2_error: float = math.nan
    zero_positions: np.ndarray | None = None   # kept in memory, not in CSV


@dataclass
class ObservableSeries:
    records: list[ObservableRecord] = field(default_factory=list)
    t_breakdown: float | None = None
    breakdown_reason: str | None = None

    def append(self, rec: ObservableRecord):
        if self.records and rec.t <= self.records[-1].t:
            raise ValueError("records must be strictly increasing in t")
        self.records.append(rec)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=float)

    @property
    def ts(self) -> np.ndarray:
        return self.column("t")

    def __len__(self):
        return len(self.records)

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write(",".join(SERIES_COLUMNS) + "\n")
            for r in self.records:
                cells = []
                for name in SERIES_COLUMNS:
                    v = getattr(r, name)
                    cells.append("" if v is None or math.isnan(v) else f"{v:.12g}")
                fh.write(",".join(cells) + "\n")


def ensemble_width(p: np.ndarray, grid: Grid1D) -> float:
    """Standard deviation of the position distribution p (renormalized)."""
    p = np.asarray(p, dtype=float)
    total = quadrature(p, grid).real
    if total <= 0:
        raise ValueError("cannot take the width of a non-positive distribution")
    mean = quadrature(grid.x * p, grid).real / total
    var = quadrature((grid.x - mean) ** 2 * p, grid).real / total
    return float(np.sqrt(max(var, 0.0)))


def coherence_length(rho: np.ndarray, grid: Grid1D) -> float:
    """Width of |rho| in the off-diagonal direction y = x - x'.

    The weight of each y is the magnitude sum along the corresponding
    antidiagonal; the result is the standard deviation of y under it.
    """
    n = grid.npoints
    a = np.abs(np.asarray(rho))
    offsets = np.arange(-(n - 1), n)
    sums = np.array([a.diagonal(d).sum() for d in offsets])
    total = sums.sum()
    if total <= 0:
        raise ValueError("cannot take the coherence length of a zero matrix")
    y = -offsets * grid.dx          # element [j, j+d] has x - x' = -d*dx
    mean = (sums * y).sum() / total
    var = (sums * (y - mean) ** 2).sum() / total
    return float(np.sqrt(max(var, 0.0)))


def momentum_second_moment(state: WaveState, hbar: float = 1.0) -> float:
    """<p^2> from the spectrum; insensitive to the overall norm."""
    power = np.abs(dft_forward(state.psi)) ** 2
    return float(hbar**2 * np.sum(state.grid.k**2 * power) / np.sum(power))


def kinetic_energy(state: WaveState, hbar: float = 1.0, mass: float = 1.0) -> float:
    """<p^2> / 2m of a wavefunction, via the spectral representation."""
    return momentum_second_moment(state, hbar) / (2.0 * mass)


def density_momentum_second_moment(rho: np.ndarray, grid: Grid1D,
                                   hbar: float = 1.0) -> float:
    """<p^2> = hbar^2 * Tr(d_x d_x' rho) / Tr(rho), done spectrally."""
    kk = (1j * grid.k)[:, None] * (1j * grid.k)[None, :]
    mixed = np.fft.ifft2(np.fft.fft2(rho) * kk)
    trace = quadrature(np.diagonal(rho), grid).real
    return float(hbar**2 * quadrature(np.diagonal(mixed), grid).real / trace)


def density_kinetic_energy(rho: np.ndarray, grid: Grid1D,
                           hbar: float = 1.0, mass: float = 1.0) -> float:
    return density_momentum_second_moment(rho, grid, hbar) / (2.0 * mass)


def purity(rho: np.ndarray, grid: Grid1D) -> float:
    """Tr(rho^2) with the dx^2 weight; 1 for a pure state."""
    return float(np.sum(np.abs(rho) ** 2) * grid.dx**2)


def hermiticity_error(rho: np.ndarray) -> float:
    return float(np.max(np.abs(rho - rho.conj().T)))


def _periodic_extrema(p: np.ndarray):
    """Indices of strict local maxima and minima with periodic neighbors."""
    left = np.roll(p, 1)
    right = np.roll(p, -1)
    maxima = np.flatnonzero((p > left) & (p >= right))
    minima = np.flatnonzero((p < left) & (p <= right))
    return maxima, minima


def fringe_visibility(p: np.ndarray, grid: Grid1D,
                      window: tuple[float, float]) -> float | None:
    """(max - min) / (max + min) of the strongest adjacent extremum pair.

    Only extrema inside the window count, and only pairs that are adjacent
    in x, so envelope decay across the pattern does not masquerade as lost
    contrast. Returns None when the window holds no usable pair.
    """
    p = np.asarray(p, dtype=float)
    lo, hi = window
    maxima, minima = _periodic_extrema(p)
    inside = lambda idx: idx[(grid.x[idx] >= lo) & (grid.x[idx] <= hi)]
    tagged = sorted(
        [(i, 1) for i in inside(maxima)] + [(i, -1) for i in inside(minima)]
    )
    best = None
    for (i_a, kind_a), (i_b, kind_b) in zip(tagged, tagged[1:]):
        if kind_a == kind_b:
            continue
        hi_v, lo_v = (p[i_a], p[i_b]) if kind_a == 1 else (p[i_b], p[i_a])
        if best is None or hi_v > best[0]:
            best = (hi_v, lo_v)
    if best is None:
        return None
    hi_v, lo_v = best
    if hi_v + lo_v == 0:
        return None
    return float((hi_v - lo_v) / (hi_v + lo_v))


def find_zeros(state: WaveState, tol: float = 1e-10) -> np.ndarray:
    """Positions where the intensity dips below tol at a local minimum.

    A genuine first-order zero rises quadratically out of the dip, so the
    shoulders next to the minimum must climb back above tol and well above
    the dip itself; that rejects smooth tail floors and the sub-tolerance
    ripple that grids develop at machine-level amplitudes. Positions are
    refined off-grid by a parabolic fit through the minimum and its
    neighbors.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    p = state.intensity
    _, minima = _periodic_extrema(p)
    hits = minima[p[minima] < tol]
    grid = state.grid
    out = []
    n = grid.npoints
    for i in hits:
        pm, p0, pp = p[(i - 1) % n], p[i], p[(i + 1) % n]
        if max(pm, pp) < max(4 * p0, tol):   # no rise out of the dip
            continue
        denom = pm - 2 * p0 + pp
        shift = 0.5 * (pm - pp) / denom if denom > 0 else 0.0
        out.append(grid.x[i] + np.clip(shift, -0.5, 0.5) * grid.dx)
    return np.array(sorted(out))


def rel_l2_error(density, wave: WaveState) -> float:
    """Err between a density matrix and the outer product of a wavefunction.

    Err(f, g) = ||f - g|| / sqrt(||f|| ||g||) with the 2-D L2 norm
    (Frobenius weighted by dx^2). Both states must live on the same grid
    at the same time. `density` is any object with rho / t / grid fields.
    """
    grid = density.grid
    if not grid.compatible(wave.grid):
        raise ValueError("density matrix and wavefunction grids differ")
    if abs(density.t - wave.t) > 1e-9 * max(1.0, abs(wave.t)):
        raise ValueError(
            f"comparing states at different times {density.t} vs {wave.t}"
        )
    rho_m = np.outer(wave.psi, wave.psi.conj())
    n_r = np.linalg.norm(density.rho) * grid.dx
    n_m = np.linalg.norm(rho_m) * grid.dx
    if n_r == 0 or n_m == 0:
        raise ValueError("rel_l2_error is undefined for zero-norm input")
    return float(np.linalg.norm(density.rho - rho_m) * grid.dx / np.sqrt(n_r * n_m))
