"""Canned experiment drivers shared by the command-line tool and the tests.

These wire the modules together the way the comparison study runs them:
calibrate the coupling intercept from the moment oracle, run both
propagators on a common clock, and post-process widths, errors, kinks,
and breakdown times.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .coupling import (
    ConstantSchedule,
    InterpLinearSchedule,
    Schedule,
    TabulatedSchedule,
    characteristic_time,
    fit_c0,
)
from .grid import Grid1D, make_grid
from .jzme import JZMEConfig, from_wavefunction
from .jzme import propagate as propagate_density
from .logse import LogSEConfig
from .logse import propagate as propagate_wave
from .moments import second_moment_history
from .observables import rel_l2_error
from .reglog import DEFAULT_SCHEME, rel_distance
from .states import WaveState, by_name


def calibrated_c0(lam: float, b: float = 1.0, hbar: float = 1.0,
                  horizon_tb: float = 12.0, dt_tb: float = 1e-3) -> float:
    """Long-time intercept of the coupling, fit on the oracle's second moments.

    The second-moment history grows as t^3, which gives the tabulated
    coupling the slope lam/2 the interpolated form assumes at long times;
    fitting the width itself would hand back a slope of 4*lam/5 and a
    uselessly large intercept.
    """
    t_b = characteristic_time(lam, b, hbar)
    times, xx = second_moment_history(lam, b, horizon_tb * t_b, dt=dt_tb * t_b,
                                      hbar=hbar)
    return fit_c0(times, xx, lam, hbar, t_b=t_b)


def build_schedule(mode: str, lam: float, b: float = 1.0, hbar: float = 1.0,
                   c0: float = 0.0, horizon_tb: float = 30.0) -> Schedule:
    """Coupling schedule for a run; lam = 0 yields the free control."""
    if lam == 0.0:
        return ConstantSchedule(0.0)
    t_b = characteristic_time(lam, b, hbar)
    if mode == "interp":
        return InterpLinearSchedule(lam, c0, t_b)
    if mode == "integral":
        times, xx = second_moment_history(lam, b, horizon_tb * t_b,
                                          dt=1e-3 * t_b, hbar=hbar)
        return TabulatedSchedule(lam, times, xx, hbar)
    raise ValueError(f"unknown gamma mode {mode!r}")


def kink_time(ts: np.ndarray, widths: np.ndarray):
    """First interior local minimum of d(log w)/d(log t), or None.

    The slope tends to zero at t -> 0 for any smooth start, so the left
    endpoint never counts as a kink.
    """
    sel = ts > 0
    lt, lw = np.log(ts[sel]), np.log(widths[sel])
    if len(lt) < 5:
        return None
    slope = np.gradient(lw, lt)
    for i in range(1, len(slope) - 1):
        if slope[i] < slope[i - 1] and slope[i] < slope[i + 1]:
            return float(ts[sel][i])
    return None


def error_rise_time(ts: np.ndarray, errs: np.ndarray, threshold: float = 0.1):
    """First record time at which the error curve exceeds the threshold."""
    above = np.flatnonzero(np.asarray(errs) > threshold)
    return float(ts[above[0]]) if len(above) else None


@dataclass
class CompareResult:
    grid: Grid1D
    ts: np.ndarray
    width_logse: np.ndarray
    width_jzme: np.ndarray
    rel_l2: np.ndarray          # full-matrix Err against the pure outer product
    rel_l2_diag: np.ndarray     # Err of the position densities (the curve
                                # that stays small until the runs diverge)
    kink: float | None
    rise_time: float | None
    t_breakdown_logse: float | None
    t_breakdown_jzme: float | None
    wave_series: object = None
    density_series: object = None


def compare_run(grid: Grid1D, ic_kind: str, schedule: Schedule, lam: float,
                t_final: float, dt: float = 0.05, record_every: int = 4,
                hbar: float = 1.0, mass: float = 1.0, scheme=DEFAULT_SCHEME,
                b: float = 1.0, s: float = 1.0, x0: float = 0.0) -> CompareResult:
    """Run both propagators on one grid and clock and join their records."""
    state = by_name(ic_kind, grid, b=b, s=s, x0=x0)
    wcfg = LogSEConfig(dt=dt, schedule=schedule, scheme=scheme, hbar=hbar, mass=mass)
    wres = propagate_wave(state, t_final, wcfg, record_every=record_every,
                          collect_frames=True)
    frames = {round(t, 9): psi for t, psi in wres.frames}

    joint = {"t": [], "wl": [], "wj": [], "e2": [], "ed": []}

    def on_record(dstate, rec):
        psi = frames.get(round(dstate.t, 9))
        if psi is None:
            return
        wave = WaveState(psi, dstate.t, grid)
        joint["t"].append(dstate.t)
        joint["wj"].append(rec.width)
        joint["e2"].append(rel_l2_error(dstate, wave))
        diag = dstate.diagonal
        joint["ed"].append(rel_distance(diag / max(rec.norm, 1e-300),
                                        np.abs(psi) ** 2))

    jcfg = JZMEConfig(dt=dt, lam=lam, hbar=hbar, mass=mass)
    jres = propagate_density(from_wavefunction(state), t_final, jcfg,
                             record_every=record_every,
                             with_coherence_length=False, on_record=on_record)

    wave_w = {round(t, 9): w for t, w in zip(wres.series.ts,
                                             wres.series.column("width"))}
    ts = np.array(joint["t"])
    width_logse = np.array([wave_w[round(t, 9)] for t in ts])
    return CompareResult(
        grid=grid,
        ts=ts,
        width_logse=width_logse,
        width_jzme=np.array(joint["wj"]),
        rel_l2=np.array(joint["e2"]),
        rel_l2_diag=np.array(joint["ed"]),
        kink=kink_time(wres.series.ts, wres.series.column("width")),
        rise_time=error_rise_time(np.array(joint["t"]), np.array(joint["ed"])),
        t_breakdown_logse=wres.series.t_breakdown,
        t_breakdown_jzme=jres.series.t_breakdown,
        wave_series=wres.series,
        density_series=jres.series,
    )


@dataclass
class BreakdownRow:
    L: float
    N: int
    t_breakdown: float | None
    censored: bool


#: Records land this many characteristic times apart in the breakdown scan,
#: coarse enough for the kinetic-energy jump factor to clear 10x at the blowup.
SCAN_RECORD_SPACING_TB = 2.5


def _scan_one(args) -> BreakdownRow:
    (L, dx, dt, lam, c0, hbar, mass, t_max, b) = args
    n = int(round(L / dx))
    n += n % 2
    grid = make_grid(L, n)
    t_b = characteristic_time(lam, b, hbar) if lam > 0 else 1.0
    schedule = build_schedule("interp", lam, b, hbar, c0)
    cfg = LogSEConfig(dt=dt, schedule=schedule, hbar=hbar, mass=mass)
    state = by_name("gaussian", grid, b=b)
    record_every = max(1, int(round(SCAN_RECORD_SPACING_TB * t_b / dt)))
    res = propagate_wave(state, t_max, cfg, record_every=record_every)
    t_bd = res.series.t_breakdown
    return BreakdownRow(L=L, N=n, t_breakdown=t_bd, censored=t_bd is None)


def breakdown_scan(L_list, dx: float = 30 / 2048, dt: float = 0.05,
                   lam: float = 1.0, c0: float = 0.0, hbar: float = 1.0,
                   mass: float = 1.0, t_max_tb: float = 40.0, b: float = 1.0,
                   max_workers: int | None = None) -> list[BreakdownRow]:
    """Breakdown time of the Gaussian run for each domain width.

    Point density is held fixed (N scales with L). Runs that survive to
    t_max_tb are reported censored. LOGDEC_THREADS caps the worker pool.
    """
    L_list = list(L_list)
    if any(b >= a for a, b in zip(L_list, L_list[1:])) or min(L_list) <= 0:
        raise ValueError("L_list must be positive and strictly increasing")
    t_b = characteristic_time(lam, b, hbar) if lam > 0 else 1.0
    args = [(L, dx, dt, lam, c0, hbar, mass, t_max_tb * t_b, b) for L in L_list]
    if max_workers is None:
        max_workers = int(os.environ.get("LOGDEC_THREADS", "0")) or min(
            len(L_list), os.cpu_count() or 1
        )
    if max_workers <= 1 or len(L_list) == 1:
        return [_scan_one(a) for a in args]
    with ProcessPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(_scan_one, args))
