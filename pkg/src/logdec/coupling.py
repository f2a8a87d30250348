"""Time-dependent coupling gamma(t) for the nonlinear propagator.

Two families are provided:

* ``InterpLinearSchedule`` - tanh-sigmoid blend of the two linear regimes,
  2*Lam*t at short times and c0 + Lam*t/2 at long times, switching over the
  characteristic time t_b = hbar / (Lam * b^2).
* ``TabulatedSchedule`` - gamma computed from a supplied history of the
  spreading state, gamma(t) = (2 Lam / hbar) * integral_0^t w / w(t), with the
  running integral done by the trapezoid rule on a piecewise-linear w.

``fit_c0`` calibrates the long-time intercept of the interpolated form from a
tabulated schedule. Feed it the second-moment history of the moment oracle:
that choice makes the tabulated gamma reproduce the density-matrix evolution
exactly for Gaussian states and approach slope Lam/2, matching the intended
long-time regime of the interpolation (see tests for the cross-check).
"""

import numpy as np

# 3-point Gauss-Legendre on [-1, 1]; exact through degree 5.
_GAUSS_NODES = np.array([-np.sqrt(3.0 / 5.0), 0.0, np.sqrt(3.0 / 5.0)])
_GAUSS_WEIGHTS = np.array([5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])


def characteristic_time(lam: float, b: float, hbar: float = 1.0) -> float:
    """Decoherence timescale t_b = hbar / (lam * b^2)."""
    if lam <= 0 or b <= 0 or hbar <= 0:
        raise ValueError("lam, b, hbar must all be positive")
    return hbar / (lam * b * b)


def sigmoid_blend(t, t_b: float):
    """Smooth switch (1 + tanh(t - t_b)) / 2, equal to 1/2 at t = t_b."""
    return (1.0 + np.tanh(np.asarray(t, dtype=float) - t_b)) / 2.0


def gamma_interp(t, lam: float, c0: float, t_b: float):
    """Sigmoid-interpolated coupling between the two linear regimes."""
    t = np.asarray(t, dtype=float)
    s = sigmoid_blend(t, t_b)
    out = 2.0 * lam * t * (1.0 - s) + (c0 + lam * t / 2.0) * s
    return out if out.ndim else float(out)


def gamma_interp_derivative(t, lam: float, c0: float, t_b: float):
    """Analytic d gamma/dt of the interpolated form (C1-smoothness check)."""
    t = np.asarray(t, dtype=float)
    s = sigmoid_blend(t, t_b)
    ds = 0.5 / np.cosh(t - t_b) ** 2
    out = 2.0 * lam * (1.0 - s) - 2.0 * lam * t * ds + lam / 2.0 * s \
        + (c0 + lam * t / 2.0) * ds
    return out if out.ndim else float(out)


class Schedule:
    """Coupling rule: gamma(t) plus its exact-enough integral over a substep."""

    def gamma(self, t):
        raise NotImplementedError

    def gamma_integral(self, t0: float, t1: float) -> float:
        """integral of gamma over [t0, t1] by 3-point Gauss (error O(dt^7))."""
        half = (t1 - t0) / 2.0
        mid = (t1 + t0) / 2.0
        nodes = mid + half * _GAUSS_NODES
        return float(half * np.sum(_GAUSS_WEIGHTS * np.asarray(self.gamma(nodes))))


class ConstantSchedule(Schedule):
    """gamma(t) = const; value 0 gives the free (linear Schrodinger) limit."""

    def __init__(self, value: float = 0.0):
        self.value = float(value)

    def gamma(self, t):
        t = np.asarray(t, dtype=float)
        out = np.full_like(t, self.value)
        return out if out.ndim else float(out)

    def gamma_integral(self, t0, t1):
        return self.value * (t1 - t0)


class InterpLinearSchedule(Schedule):
    def __init__(self, lam: float, c0: float, t_b: float):
        if lam < 0:
            raise ValueError("lam must be non-negative")
        if t_b <= 0:
            raise ValueError("t_b must be positive")
        self.lam = float(lam)
        self.c0 = float(c0)
        self.t_b = float(t_b)

    def gamma(self, t):
        return gamma_interp(t, self.lam, self.c0, self.t_b)

    def gamma_derivative(self, t):
        return gamma_interp_derivative(t, self.lam, self.c0, self.t_b)


def gamma_from_width(t, lam: float, hbar: float,
                     times: np.ndarray, widths: np.ndarray):
    """Coupling from a tabulated width history.

    gamma(t) = (2 lam / hbar) * (1 / w(t)) * integral_0^t w(t') dt'
    with w interpolated piecewise-linearly and the running integral by the
    trapezoid rule (consistent with the splitting's O(dt^2)).
    """
    times = np.asarray(times, dtype=float)
    widths = np.asarray(widths, dtype=float)
    if times.ndim != 1 or times.shape != widths.shape or len(times) < 2:
        raise ValueError("need matching 1-D time/width arrays of length >= 2")
    if np.any(np.diff(times) <= 0):
        raise ValueError("width history times must be strictly increasing")
    if np.any(widths <= 0):
        raise ValueError("width history must be positive everywhere")
    t = np.asarray(t, dtype=float)
    if np.any(t < times[0]) or np.any(t > times[-1]):
        raise ValueError("requested time outside the width history range")
    running = np.concatenate(
        [[0.0], np.cumsum(np.diff(times) * (widths[1:] + widths[:-1]) / 2.0)]
    )
    integral = np.interp(t, times, running)
    out = (2.0 * lam / hbar) * integral / np.interp(t, times, widths)
    return out if out.ndim else float(out)


class TabulatedSchedule(Schedule):
    """gamma built from a width history, e.g. the moment oracle's output."""

    def __init__(self, lam: float, times, widths, hbar: float = 1.0):
        self.lam = float(lam)
        self.hbar = float(hbar)
        self.times = np.asarray(times, dtype=float)
        self.widths = np.asarray(widths, dtype=float)
        # validates the history once up front
        gamma_from_width(self.times[0], lam, hbar, self.times, self.widths)

    def gamma(self, t):
        return gamma_from_width(t, self.lam, self.hbar, self.times, self.widths)


def fit_c0_from_gamma(times, gammas, lam: float) -> float:
    """Least-squares intercept of gamma samples against the model c0 + lam*t/2.

    With the slope held at lam/2 the optimal intercept is the mean residual.
    """
    times = np.asarray(times, dtype=float)
    gammas = np.asarray(gammas, dtype=float)
    if len(times) < 10:
        raise ValueError("fit window contains fewer than 10 samples")
    return float(np.mean(gammas - lam * times / 2.0))


def fit_c0(times, widths, lam: float, hbar: float = 1.0,
           fit_window: tuple[float, float] | None = None,
           t_b: float | None = None) -> float:
    """Calibrate c0 from a tabulated history via gamma_from_width.

    The window must sit in the long-time regime, t >= 5*t_b, and must
    contain at least 10 history samples. When t_b is not given it is
    inferred from the first history value taken as the initial width.
    """
    times = np.asarray(times, dtype=float)
    widths = np.asarray(widths, dtype=float)
    if t_b is None:
        t_b = characteristic_time(lam, float(widths[0]), hbar)
    if fit_window is None:
        fit_window = (5.0 * t_b, min(10.0 * t_b, times[-1]))
    lo, hi = fit_window
    if lo < 5.0 * t_b:
        raise ValueError(
            f"fit window starts at {lo:g}, inside the short-time regime "
            f"(needs t >= {5.0 * t_b:g})"
        )
    sel = (times >= lo) & (times <= hi)
    if np.count_nonzero(sel) < 10:
        raise ValueError("fit window contains fewer than 10 history samples")
    tw = times[sel]
    gw = gamma_from_width(tw, lam, hbar, times, widths)
    return fit_c0_from_gamma(tw, gw, lam)
