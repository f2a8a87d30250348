"""Semi-analytic oracle: second-moment ODEs of the decohering Gaussian.

Taking moments of the master equation closes exactly on Gaussian states:

    d<x^2>/dt = 2 <xp>_sym / m
    d<xp>_sym/dt = <p^2> / m
    d<p^2>/dt = 2 * Lam * hbar

The system is linear with polynomial solutions (cubic in <x^2>), so the RK4
stepper is exact up to roundoff. This module is deliberately independent of
the grid propagators: it is the cross-check, not the thing being checked.
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class GaussianMoments:
    """Second moments <x^2>, <xp+px>/2, <p^2> at time t."""

    xx: float
    xp: float
    pp: float
    t: float = 0.0

    def uncertainty_product(self) -> float:
        return self.xx * self.pp - self.xp**2

    def width(self) -> float:
        return float(np.sqrt(self.xx))


def minimum_uncertainty(b: float, hbar: float = 1.0) -> GaussianMoments:
    """Moments of the real Gaussian with intensity standard deviation b."""
    if b <= 0:
        raise ValueError("b must be positive")
    return GaussianMoments(xx=b * b, xp=0.0, pp=hbar * hbar / (4 * b * b), t=0.0)


def _deriv(m: GaussianMoments, lam: float, hbar: float, mass: float):
    return np.array([2.0 * m.xp / mass, m.pp / mass, 2.0 * lam * hbar])


def step_moments(m: GaussianMoments, dt: float, lam: float,
                 hbar: float = 1.0, mass: float = 1.0) -> GaussianMoments:
    """One RK4 step of the moment system."""
    y = np.array([m.xx, m.xp, m.pp])

    def f(state):
        return np.array([2.0 * state[1] / mass, state[2] / mass, 2.0 * lam * hbar])

    k1 = f(y)
    k2 = f(y + dt / 2 * k1)
    k3 = f(y + dt / 2 * k2)
    k4 = f(y + dt * k3)
    y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return GaussianMoments(xx=y[0], xp=y[1], pp=y[2], t=m.t + dt)


def evolve_moments(b: float, lam: float, t_final: float, dt: float = 1e-3,
                   hbar: float = 1.0, mass: float = 1.0):
    """Integrate from the minimum-uncertainty start; returns (t, xx, xp, pp)."""
    n = int(round(t_final / dt))
    m = minimum_uncertainty(b, hbar)
    ts = np.empty(n + 1)
    xx = np.empty(n + 1)
    xp = np.empty(n + 1)
    pp = np.empty(n + 1)
    ts[0], xx[0], xp[0], pp[0] = m.t, m.xx, m.xp, m.pp
    for i in range(n):
        m = step_moments(m, dt, lam, hbar, mass)
        ts[i + 1], xx[i + 1], xp[i + 1], pp[i + 1] = m.t, m.xx, m.xp, m.pp
    return ts, xx, xp, pp


def width_history(lam: float, b: float, t_final: float, dt: float = 1e-3,
                  hbar: float = 1.0, mass: float = 1.0):
    """Sampled ensemble width w(t) = sqrt(<x^2>); (times, widths) arrays."""
    ts, xx, _, _ = evolve_moments(b, lam, t_final, dt, hbar, mass)
    return ts, np.sqrt(xx)


def second_moment_history(lam: float, b: float, t_final: float, dt: float = 1e-3,
                          hbar: float = 1.0, mass: float = 1.0):
    """Sampled <x^2>(t); this is the history that calibrates the coupling."""
    ts, xx, _, _ = evolve_moments(b, lam, t_final, dt, hbar, mass)
    return ts, xx


def free_width(b: float, t, hbar: float = 1.0, mass: float = 1.0):
    """Closed-form free-particle spreading sqrt(b^2 + (hbar t / 2 m b)^2)."""
    t = np.asarray(t, dtype=float)
    out = np.sqrt(b * b + (hbar * t / (2 * mass * b)) ** 2)
    return out if out.ndim else float(out)
