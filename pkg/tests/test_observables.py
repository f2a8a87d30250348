import math

import numpy as np
import pytest

from logdec.grid import make_grid, quadrature
from logdec.jzme import DensityState, decoherence_step, from_wavefunction
from logdec.observables import (
    ObservableRecord,
    ObservableSeries,
    coherence_length,
    density_kinetic_energy,
    ensemble_width,
    find_zeros,
    fringe_visibility,
    hermiticity_error,
    kinetic_energy,
    purity,
    rel_l2_error,
)
from logdec.states import WaveState, gaussian, twin_gaussian


@pytest.fixture(scope="module")
def grid():
    return make_grid(30, 2048)


def test_width_gaussian(grid):
    assert ensemble_width(gaussian(grid, 1.0).intensity, grid) == pytest.approx(1.0, abs=1e-3)


def test_width_uniform_box(grid):
    p = np.ones(grid.npoints)
    assert ensemble_width(p, grid) == pytest.approx(30 / math.sqrt(12), rel=1e-4)


def test_width_twin_gaussian(grid):
    # independent closed form including the interference term:
    # <x^2> = (4 + 2 e^{-1/2}) / (2 + 2 e^{-1/2}) for b = s = 1
    # (the naive two-Gaussian mixture value sqrt(2) ignores the cross term)
    expect = math.sqrt((4 + 2 * math.exp(-0.5)) / (2 + 2 * math.exp(-0.5)))
    got = ensemble_width(twin_gaussian(grid, 1.0, 1.0).intensity, grid)
    assert got == pytest.approx(expect, abs=1e-3)
    assert got == pytest.approx(1.27376, abs=1e-3)


def test_width_translation_and_scaling(grid):
    w0 = ensemble_width(gaussian(grid, 1.0).intensity, grid)
    w_shift = ensemble_width(gaussian(grid, 1.0, x0=3.0).intensity, grid)
    assert w_shift == pytest.approx(w0, rel=1e-9)
    wide = make_grid(60, 2048)
    w2 = ensemble_width(gaussian(wide, 2.0).intensity, wide)
    assert w2 == pytest.approx(2 * w0, rel=1e-6)


def test_width_rejects_zero_distribution(grid):
    with pytest.raises(ValueError):
        ensemble_width(np.zeros(grid.npoints), grid)


def test_coherence_length_pure_gaussian():
    g = make_grid(30, 512)
    rho = from_wavefunction(gaussian(g, 1.0))
    assert coherence_length(rho.rho, g) == pytest.approx(2.0, rel=0.02)


def test_coherence_length_decreases_under_pure_decoherence():
    g = make_grid(30, 256)
    st = from_wavefunction(gaussian(g, 1.0))
    lengths = [coherence_length(st.rho, g)]
    for _ in range(5):
        st = decoherence_step(st, 0.2, lam=1.0)
        lengths.append(coherence_length(st.rho, g))
    assert all(b < a for a, b in zip(lengths, lengths[1:]))


def test_kinetic_energy_gaussian(grid):
    # minimum-uncertainty packet: <p^2> = hbar^2 / 4 b^2, KE = 1/8
    assert kinetic_energy(gaussian(grid, 1.0)) == pytest.approx(0.125, abs=1e-6)


def test_kinetic_energy_plane_wave(grid):
    k1 = grid.k[5]
    st = WaveState(np.exp(1j * k1 * grid.x), 0.0, grid)
    assert kinetic_energy(st) == pytest.approx(k1**2 / 2, rel=1e-12)


def test_density_kinetic_energy_matches_wavefunction(grid):
    g = make_grid(30, 256)
    wave = gaussian(g, 1.0)
    rho = from_wavefunction(wave)
    assert density_kinetic_energy(rho.rho, g) == pytest.approx(
        kinetic_energy(wave), rel=1e-10
    )


def test_purity_and_hermiticity(grid):
    g = make_grid(30, 256)
    rho = from_wavefunction(twin_gaussian(g, 1.0, 1.0))
    assert purity(rho.rho, g) == pytest.approx(1.0, abs=1e-8)
    assert hermiticity_error(rho.rho) < 1e-14
    assert rho.trace() == pytest.approx(1.0, abs=1e-10)


def test_visibility_full_contrast(grid):
    p = 1 + np.cos(2 * np.pi * 8 * grid.x / grid.length)
    assert fringe_visibility(p, grid, (-10, 10)) == pytest.approx(1.0, abs=1e-9)


def test_visibility_partial_contrast(grid):
    p = 2 + np.cos(2 * np.pi * 8 * grid.x / grid.length)
    assert fringe_visibility(p, grid, (-10, 10)) == pytest.approx(0.5, abs=1e-9)


def test_visibility_without_extrema(grid):
    assert fringe_visibility(np.exp(-grid.x**2), grid, (2.0, 3.0)) is None


def test_find_zeros_gaussian_empty(grid):
    assert len(find_zeros(gaussian(grid, 1.0))) == 0


def test_find_zeros_sine(grid):
    psi = np.sin(2 * np.pi * grid.x / grid.length).astype(complex)
    psi /= np.sqrt(quadrature(np.abs(psi) ** 2, grid).real)
    zeros = find_zeros(WaveState(psi, 0.0, grid))
    assert len(zeros) == 2
    assert min(abs(zeros - 0.0)) < grid.dx / 2
    assert min(abs(zeros + grid.length / 2)) < grid.dx / 2


def test_find_zeros_refinement_subgrid():
    # an off-grid zero: sin node shifted by a known sub-grid offset
    g = make_grid(16, 128)
    shift = 0.3 * g.dx
    psi = np.sin(2 * np.pi * (g.x - shift) / g.length).astype(complex)
    st = WaveState(psi, 0.0, g)
    zeros = find_zeros(st, tol=1e-3)
    assert len(zeros)
    assert min(abs(zeros - shift)) < 0.05 * g.dx


def test_rel_l2_error_identity_and_scaling():
    g = make_grid(30, 256)
    wave = gaussian(g, 1.0)
    rho = from_wavefunction(wave)
    assert rel_l2_error(rho, wave) < 1e-14
    doubled = DensityState(2 * rho.rho, 0.0, g)
    assert rel_l2_error(doubled, wave) == pytest.approx(1 / math.sqrt(2))


def test_rel_l2_error_preconditions():
    g = make_grid(30, 256)
    other = make_grid(60, 256)
    wave = gaussian(g, 1.0)
    rho = from_wavefunction(wave)
    with pytest.raises(ValueError):
        rel_l2_error(rho, gaussian(other, 1.0))
    with pytest.raises(ValueError):
        rel_l2_error(DensityState(rho.rho, 1.0, g), wave)
    with pytest.raises(ValueError):
        rel_l2_error(DensityState(np.zeros_like(rho.rho), 0.0, g), wave)


def test_series_container_and_csv(tmp_path):
    s = ObservableSeries()
    s.append(ObservableRecord(t=0.0, width=1.0, norm=1.0, kinetic_energy=0.125))
    s.append(ObservableRecord(t=0.5, width=1.2, norm=1.0, kinetic_energy=0.13,
                              visibility=0.9))
    with pytest.raises(ValueError):
        s.append(ObservableRecord(t=0.5))
    path = tmp_path / "series.csv"
    s.to_csv(path)
    text = path.read_text().splitlines()
    assert text[0] == "t,width,coherence_length,norm,kinetic_energy,visibility,rel_l2_error"
    assert text[1] == "0,1,,1,0.125,,"
    assert text[2].startswith("0.5,1.2,,1,0.13,0.9,")
    s.to_csv(tmp_path / "again.csv")
    assert (tmp_path / "again.csv").read_text() == path.read_text()
    assert np.allclose(s.column("width"), [1.0, 1.2])
