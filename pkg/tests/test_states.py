import numpy as np
import pytest

from logdec.grid import make_grid, quadrature
from logdec.observables import ensemble_width
from logdec.states import by_name, gaussian, lorentzian, sech, twin_gaussian


@pytest.fixture(scope="module")
def grid():
    return make_grid(30, 2048)


def reflected(psi):
    # x -> -x maps sample j to sample (N - j) mod N on a grid centered at 0
    n = len(psi)
    return psi[(-np.arange(n)) % n]


def test_gaussian_width_and_mean(grid):
    st = gaussian(grid, b=1.0)
    assert abs(ensemble_width(st.intensity, grid) - 1.0) < 1e-3
    st2 = gaussian(grid, b=1.0, x0=2.0)
    mean = quadrature(grid.x * st2.intensity, grid).real
    assert abs(mean - 2.0) < 1e-6


def test_gaussian_peak_intensity(grid):
    # normalized |a|^2 is the normal density: peak = 1/(sqrt(2 pi) b)
    st = gaussian(grid, b=1.0)
    peak = st.intensity[np.argmin(np.abs(grid.x))]
    assert abs(peak - 1 / np.sqrt(2 * np.pi)) < 1e-9


def test_gaussian_boundary_warning():
    g = make_grid(30, 512)
    with pytest.warns(UserWarning, match="wrap-around"):
        gaussian(g, b=5.0)


def test_lorentzian_shape_ratio():
    # L = 32 makes x = 0 and x = b exact grid samples
    g = make_grid(32, 2048)
    st = lorentzian(g, b=1.0)
    i0 = st.intensity[np.argmin(np.abs(g.x))]
    ib = st.intensity[np.argmin(np.abs(g.x - 1.0))]
    assert abs(ib / i0 - 0.25) < 1e-12
    assert abs(st.norm_squared() - 1.0) < 1e-10


def test_lorentzian_second_moment_grid_dependent(grid):
    # heavy tails: finite on any grid but not a universal number
    m2_30 = quadrature(grid.x**2 * lorentzian(grid, 1.0).intensity, grid).real
    wide = make_grid(120, 8192)
    m2_120 = quadrature(wide.x**2 * lorentzian(wide, 1.0).intensity, wide).real
    assert np.isfinite(m2_30) and np.isfinite(m2_120)
    assert 0.5 < m2_30 < 1.5
    assert abs(m2_120 - m2_30) > 0.01


def test_sech_shape_and_peak():
    g = make_grid(32, 2048)
    st = sech(g, b=1.0)
    a0 = np.abs(st.psi[np.argmin(np.abs(g.x))])
    ab = np.abs(st.psi[np.argmin(np.abs(g.x - 1.0))])
    assert abs(a0 / ab - np.cosh(1.0)) < 1e-12
    assert abs(st.norm_squared() - 1.0) < 1e-10
    # integral of sech^2(x/b) is 2b, so normalized peak intensity is 1/(2b)
    peak = st.intensity[np.argmin(np.abs(g.x))]
    assert abs(peak - 0.5) < 1e-8


def test_twin_gaussian_symmetry_and_merge(grid):
    st = twin_gaussian(grid, b=1.0, s=1.0)
    assert np.max(np.abs(st.psi - reflected(st.psi))) < 1e-12
    merged = twin_gaussian(grid, b=1.0, s=0.0)
    single = gaussian(grid, b=1.0)
    assert np.max(np.abs(merged.psi - single.psi)) < 1e-12


def test_twin_gaussian_normalization_constant(grid):
    # closed form: integral of the raw shape squared is
    #   2 sqrt(2 pi) b (1 + exp(-s^2 / 2 b^2))
    b = s = 1.0
    shape = np.exp(-((grid.x - s) ** 2) / (4 * b**2)) + np.exp(
        -((grid.x + s) ** 2) / (4 * b**2)
    )
    n_grid = quadrature(shape**2, grid).real
    n_exact = 2 * np.sqrt(2 * np.pi) * b * (1 + np.exp(-(s**2) / (2 * b**2)))
    assert abs(n_grid - n_exact) < 1e-6
    assert abs(n_exact - 8.05395) < 1e-4


@pytest.mark.parametrize("kind", ["gaussian", "lorentzian", "sech", "twin_gaussian"])
def test_unit_norm_and_evenness(grid, kind):
    st = by_name(kind, grid, b=1.0, s=1.0)
    assert abs(st.norm_squared() - 1.0) < 1e-10
    assert np.max(np.abs(st.psi - reflected(st.psi))) < 1e-12


def test_constructor_validation(grid):
    for bad in (gaussian, lorentzian, sech):
        with pytest.raises(ValueError):
            bad(grid, b=-1.0)
    with pytest.raises(ValueError):
        twin_gaussian(grid, b=1.0, s=-0.5)
    with pytest.raises(ValueError):
        by_name("box", grid)
