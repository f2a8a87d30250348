import numpy as np
import pytest

from logdec.grid import (
    dft_forward,
    dft_inverse,
    make_grid,
    quadrature,
    spectral_derivative,
)


def test_paper_grid_spacing():
    g = make_grid(30, 2048)
    assert g.dx == 30 / 2048
    assert abs(g.dx - 0.0146484375) < 1e-15


def test_small_grid_samples():
    g = make_grid(1, 8)
    assert np.allclose(g.x, [-0.5, -0.375, -0.25, -0.125, 0.0, 0.125, 0.25, 0.375])
    assert g.dx * g.npoints == g.length


def test_wavenumber_layout():
    g = make_grid(30, 2048)
    assert g.k[0] == 0.0
    assert np.isclose(g.k[1], 2 * np.pi / 30)
    # single Nyquist mode at pi/dx
    assert np.isclose(np.max(np.abs(g.k)), np.pi / g.dx)
    assert np.count_nonzero(np.abs(g.k) == np.max(np.abs(g.k))) == 1


def test_x_samples_uniform_increasing():
    g = make_grid(7.5, 64)
    steps = np.diff(g.x)
    assert np.all(steps > 0)
    assert np.allclose(steps, g.dx)


@pytest.mark.parametrize("L,N", [(30, 2047), (30, 7), (0.0, 64), (-2, 64)])
def test_make_grid_rejects(L, N):
    with pytest.raises(ValueError):
        make_grid(L, N)


def test_quadrature_constant():
    g = make_grid(30, 2048)
    assert np.isclose(quadrature(np.ones(2048), g), 30.0, rtol=0, atol=1e-12)


def test_quadrature_normalized_gaussian():
    g = make_grid(30, 2048)
    p = np.exp(-g.x**2 / 2) / np.sqrt(2 * np.pi)
    assert abs(quadrature(p, g) - 1.0) < 1e-12


def test_quadrature_periodic_mean_free():
    g = make_grid(12.0, 256)
    assert abs(quadrature(np.sin(2 * np.pi * g.x / g.length), g)) < 1e-12


def test_quadrature_length_mismatch():
    g = make_grid(30, 2048)
    with pytest.raises(ValueError):
        quadrature(np.ones(100), g)


def test_dft_round_trip():
    rng = np.random.default_rng(7)
    f = rng.normal(size=512) + 1j * rng.normal(size=512)
    back = dft_inverse(dft_forward(f))
    assert np.max(np.abs(back - f)) / np.max(np.abs(f)) < 1e-12


def test_plane_wave_spectrum_concentrated():
    g = make_grid(30, 2048)
    f = np.exp(1j * g.k[1] * g.x)
    spec = np.abs(dft_forward(f))
    spec /= spec.max()
    assert spec[1] == 1.0
    spec[1] = 0.0
    assert spec.max() < 1e-10


def test_spectral_second_derivative_vs_closed_form():
    # d^2/dx^2 exp(-x^2/4) = (x^2/4 - 1/2) exp(-x^2/4)
    g = make_grid(30, 2048)
    f = np.exp(-g.x**2 / 4)
    exact = (g.x**2 / 4 - 0.5) * f
    got = spectral_derivative(f, g, order=2)
    assert np.max(np.abs(got - exact)) < 1e-8
    assert np.max(np.abs(got.imag)) < 1e-11


def test_spectral_derivative_of_harmonic_is_exact():
    g = make_grid(10, 128)
    for m in (1, 5, 17):
        f = np.exp(1j * g.k[m] * g.x)
        got = spectral_derivative(f, g)
        assert np.max(np.abs(got - 1j * g.k[m] * f)) < 1e-12


def test_parseval():
    g = make_grid(20, 512)
    rng = np.random.default_rng(42)
    for _ in range(5):
        f = rng.normal(size=512) + 1j * rng.normal(size=512)
        lhs = quadrature(np.abs(f) ** 2, g).real
        rhs = g.dx / g.npoints * np.sum(np.abs(dft_forward(f)) ** 2)
        assert abs(lhs - rhs) / lhs < 1e-12
