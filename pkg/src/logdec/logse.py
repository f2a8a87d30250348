"""Split-operator propagator for the logarithmic Schrodinger equation

    i da/dt = -(hbar/2m) d^2a/dx^2 + (hbar*gamma(t)/m) * a * ln|a|^2

by second-order Strang splitting: half kinetic step in Fourier space, full
nonlinear phase step in position space, half kinetic step. Both substeps are
pure phases, so the norm is conserved to roundoff and wavefunction zeros are
fixed points of the nonlinear substep.
"""

from dataclasses import dataclass, field

import numpy as np

from .coupling import Schedule
from .grid import dft_forward, dft_inverse
from .observables import (
    ObservableRecord,
    ObservableSeries,
    ensemble_width,
    find_zeros,
    fringe_visibility,
    kinetic_energy,
)
from .reglog import DEFAULT_SCHEME, RegLogScheme, reg_ln
from .states import WaveState

#: Kinetic-energy jump factor between consecutive records that flags breakdown.
BREAKDOWN_KE_FACTOR = 10.0


class NumericalBreakdownError(RuntimeError):
    """Raised when amplitudes go non-finite; carries the time of failure."""

    def __init__(self, t: float, reason: str):
        super().__init__(f"numerical breakdown at t={t:g}: {reason}")
        self.t = t
        self.reason = reason


@dataclass
class LogSEConfig:
    dt: float
    schedule: Schedule
    scheme: RegLogScheme = DEFAULT_SCHEME
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.hbar <= 0 or self.mass <= 0:
            raise ValueError("hbar and mass must be positive")


def kinetic_half_step(state: WaveState, dt: float, hbar: float = 1.0,
                      mass: float = 1.0) -> WaveState:
    """Multiply the spectrum by exp(-i (hbar/2m) k^2 dt/2)."""
    phase = np.exp(-1j * (hbar / (2 * mass)) * state.grid.k**2 * (dt / 2))
    return WaveState(dft_inverse(phase * dft_forward(state.psi)), state.t, state.grid)


def nonlinear_step(state: WaveState, dt: float, config: LogSEConfig,
                   t_start: float | None = None) -> WaveState:
    """Exact flow of the nonlinear term over [t_start, t_start + dt].

    The modulus is untouched (the step is a pointwise phase), so this is
    exact for its own flow; the coupling enters through its integral over
    the substep, which keeps second order with a time-dependent gamma.
    """
    t0 = state.t if t_start is None else t_start
    big_gamma = config.schedule.gamma_integral(t0, t0 + dt)
    phase = -1j * (config.hbar / config.mass) * big_gamma * reg_ln(
        config.scheme, np.abs(state.psi) ** 2
    )
    return WaveState(state.psi * np.exp(phase), state.t, state.grid)


def strang_step(state: WaveState, config: LogSEConfig) -> WaveState:
    """One full step: half kinetic, full nonlinear, half kinetic."""
    out = kinetic_half_step(state, config.dt, config.hbar, config.mass)
    out = nonlinear_step(out, config.dt, config, t_start=state.t)
    out = kinetic_half_step(out, config.dt, config.hbar, config.mass)
    out.t = state.t + config.dt
    if not np.all(np.isfinite(out.psi)):
        raise NumericalBreakdownError(out.t, "non-finite amplitude")
    return out


@dataclass
class PropagationResult:
    series: ObservableSeries
    state: WaveState
    frames: list = field(default_factory=list)   # (t, psi copy) at records


def propagate(state: WaveState, t_final: float, config: LogSEConfig,
              record_every: int = 1, collect_frames: bool = False,
              visibility_window: tuple[float, float] | None = None,
              track_zeros: bool = False, zero_tol: float = 1e-10,
              on_record=None) -> PropagationResult:
    """March to t_final, recording observables every record_every steps.

    A kinetic-energy jump by more than BREAKDOWN_KE_FACTOR between
    consecutive records, or any non-finite amplitude, stops the run and
    stamps the series with t_breakdown instead of raising.
    """
    if t_final < state.t:
        raise ValueError("t_final must not precede the state's time")
    series = ObservableSeries()
    result = PropagationResult(series, state.copy())
    n_steps = int(round((t_final - state.t) / config.dt))
    if n_steps == 0:
        return result

    def record(s: WaveState, last_ke: float | None):
        rec = ObservableRecord(
            t=s.t,
            width=ensemble_width(s.intensity, s.grid),
            norm=s.norm_squared(),
            kinetic_energy=kinetic_energy(s, config.hbar, config.mass),
        )
        if visibility_window is not None:
            vis = fringe_visibility(s.intensity, s.grid, visibility_window)
            rec.visibility = np.nan if vis is None else vis
        if track_zeros:
            rec.zero_positions = find_zeros(s, zero_tol)
        series.append(rec)
        if collect_frames:
            result.frames.append((s.t, s.psi.copy()))
        if on_record is not None:
            on_record(s, rec)
        if last_ke is not None and rec.kinetic_energy > BREAKDOWN_KE_FACTOR * max(
            last_ke, 1e-300
        ):
            raise NumericalBreakdownError(s.t, "kinetic energy jump")
        return rec.kinetic_energy

    current = result.state
    try:
        last_ke = record(current, None)
        for step in range(1, n_steps + 1):
            current = strang_step(current, config)
            if step % record_every == 0 or step == n_steps:
                last_ke = record(current, last_ke)
    except NumericalBreakdownError as err:
        series.t_breakdown = err.t
        series.breakdown_reason = err.reason
    result.state = current
    return result
