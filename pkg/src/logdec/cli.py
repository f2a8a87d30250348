"""Command-line driver: batch runs that emit CSV series, snapshots, SVG
charts, and a run.json manifest sufficient to re-run them exactly.

    logdec run|compare|breakdown-scan|reg-sweep|zero-pinning
           [--config FILE] [--set key=value ...] [--out DIR]

Exit codes: 0 success, 1 invalid configuration, 2 numerical breakdown
(the run stops early and records t_breakdown).
"""

import argparse
import datetime
import json
import os
import sys

import numpy as np

from . import __version__
from .coupling import characteristic_time
from .experiments import (
    breakdown_scan,
    build_schedule,
    calibrated_c0,
    compare_run,
)
from .grid import make_grid
from .jzme import JZMEConfig, from_wavefunction
from .jzme import propagate as propagate_density
from .logse import LogSEConfig
from .logse import propagate as propagate_wave
from .reglog import RegLogScheme, regularization_sweep
from .runconfig import ConfigError, RunConfig, as_key_map, load_config
from .states import by_name
from .svgplot import polyline_chart
from .zeropin import pinning_report_csv, pinning_witness, refill_exponent

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_BREAKDOWN = 2


def _now():
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


class Runner:
    """Holds the resolved config and the pieces every command needs."""

    def __init__(self, cfg: RunConfig, out_dir: str):
        self.cfg = cfg
        self.out = out_dir
        os.makedirs(out_dir, exist_ok=True)
        self.grid = make_grid(cfg.grid_L, cfg.grid_N)
        self.scheme = RegLogScheme(cfg.reglog_scheme, cfg.reglog_sigma,
                                   cfg.reglog_n_roots, cfg.reglog_p)
        lam = cfg.physics_lambda
        self.c0 = cfg.gamma_c0
        if cfg.gamma_calibrate_c0 and lam > 0:
            self.c0 = calibrated_c0(lam, cfg.ic_b, cfg.physics_hbar)
        self.schedule = build_schedule(cfg.gamma_mode, lam, cfg.ic_b,
                                       cfg.physics_hbar, self.c0)
        self.t_b = (characteristic_time(lam, cfg.ic_b, cfg.physics_hbar)
                    if lam > 0 else 1.0)
        self.summary = {"c0": self.c0, "t_b": self.t_b}
        self.started = _now()

    def path(self, name):
        return os.path.join(self.out, name)

    def initial_state(self):
        return by_name(self.cfg.ic_kind, self.grid, b=self.cfg.ic_b,
                       s=self.cfg.ic_s, x0=self.cfg.ic_x0)

    def wave_config(self):
        return LogSEConfig(dt=self.cfg.time_dt, schedule=self.schedule,
                           scheme=self.scheme, hbar=self.cfg.physics_hbar,
                           mass=self.cfg.physics_mass)

    def density_config(self):
        return JZMEConfig(dt=self.cfg.time_dt, lam=self.cfg.physics_lambda,
                          hbar=self.cfg.physics_hbar, mass=self.cfg.physics_mass)

    def write_manifest(self):
        doc = {
            "config": as_key_map(self.cfg),
            "version": __version__,
            "metadata": {"started": self.started, "finished": _now()},
            "summary": self.summary,
        }
        with open(self.path("run.json"), "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _write_csv(path, header, rows):
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            cells = []
            for v in row:
                if v is None or (isinstance(v, float) and np.isnan(v)):
                    cells.append("")
                elif isinstance(v, float):
                    cells.append(f"{v:.12g}")
                else:
                    cells.append(str(v))
            fh.write(",".join(cells) + "\n")


def _snapshot_times(runner):
    horizon = runner.cfg.time_t_final + 1e-9
    return [v * runner.t_b for v in runner.cfg.output_snapshots
            if v * runner.t_b <= horizon]


def _snapshot_writer(runner, backend):
    wanted = _snapshot_times(runner)
    grid = runner.grid
    hit = set()

    def on_record(state, rec):
        for v in wanted:
            if v in hit or abs(state.t - v) > runner.cfg.time_dt / 2:
                continue
            hit.add(v)
            tag = f"{v / runner.t_b:g}"
            if backend == "logse":
                rows = zip(grid.x, state.psi.real, state.psi.imag,
                           np.abs(state.psi) ** 2)
                _write_csv(runner.path(f"snapshot_logse_t{tag}.csv"),
                           "x,re_a,im_a,intensity", rows)
            else:
                rows = zip(grid.x, state.diagonal)
                _write_csv(runner.path(f"snapshot_jzme_t{tag}.csv"),
                           "x,rho_diag", rows)

    return on_record


def _tabulate_gamma(runner):
    lam = runner.cfg.physics_lambda
    if lam <= 0:
        return
    ts = np.geomspace(1e-2 * runner.t_b, 1e2 * runner.t_b, 200)
    interp = build_schedule("interp", lam, runner.cfg.ic_b,
                            runner.cfg.physics_hbar, runner.c0)
    integral = build_schedule("integral", lam, runner.cfg.ic_b,
                              runner.cfg.physics_hbar, horizon_tb=101.0)
    _write_csv(runner.path("gamma.csv"), "t,gamma_interp,gamma_integral",
               zip(ts, interp.gamma(ts), np.asarray(integral.gamma(ts))))


def cmd_run(runner: Runner) -> int:
    cfg = runner.cfg
    code = EXIT_OK
    if cfg.gamma_tabulate:
        _tabulate_gamma(runner)
    series_paths = []
    if cfg.backend in ("logse", "both"):
        res = propagate_wave(runner.initial_state(), cfg.time_t_final,
                             runner.wave_config(),
                             record_every=cfg.time_record_every,
                             on_record=_snapshot_writer(runner, "logse"))
        res.series.to_csv(runner.path("series_logse.csv"))
        series_paths.append(("logse", res.series))
        if res.series.t_breakdown is not None:
            runner.summary["t_breakdown_logse"] = res.series.t_breakdown
            runner.summary["breakdown_reason_logse"] = res.series.breakdown_reason
            code = EXIT_BREAKDOWN
    if cfg.backend in ("jzme", "both"):
        res = propagate_density(from_wavefunction(runner.initial_state()),
                                cfg.time_t_final, runner.density_config(),
                                record_every=cfg.time_record_every,
                                on_record=_snapshot_writer(runner, "jzme"))
        res.series.to_csv(runner.path("series_jzme.csv"))
        series_paths.append(("jzme", res.series))
        if res.series.t_breakdown is not None:
            runner.summary["t_breakdown_jzme"] = res.series.t_breakdown
            runner.summary["breakdown_reason_jzme"] = res.series.breakdown_reason
            code = EXIT_BREAKDOWN
    # series.csv mirrors the primary backend for single-file consumers
    primary = series_paths[0][1]
    primary.to_csv(runner.path("series.csv"))
    if cfg.output_emit_svg and len(primary) > 1:
        polyline_chart(
            runner.path("widths.svg"),
            [(name, s.ts, s.column("width")) for name, s in series_paths
             if len(s) > 1],
            xlabel="t", ylabel="ensemble width", title="width vs time",
        )
    for name, s in series_paths:
        tail = f", breakdown at t={s.t_breakdown:g}" if s.t_breakdown else ""
        print(f"{name}: {len(s)} records to t={s.ts[-1] if len(s) else 0:g}{tail}")
    return code


def cmd_compare(runner: Runner) -> int:
    cfg = runner.cfg
    if cfg.backend != "both":
        raise ConfigError("compare needs backend = both")
    res = compare_run(runner.grid, cfg.ic_kind, runner.schedule,
                      cfg.physics_lambda, cfg.time_t_final, dt=cfg.time_dt,
                      record_every=cfg.time_record_every,
                      hbar=cfg.physics_hbar, mass=cfg.physics_mass,
                      scheme=runner.scheme, b=cfg.ic_b, s=cfg.ic_s, x0=cfg.ic_x0)
    _write_csv(runner.path("compare.csv"),
               "t,width_logse,width_jzme,rel_l2_error,rel_l2_error_diag",
               zip(res.ts, res.width_logse, res.width_jzme, res.rel_l2,
                   res.rel_l2_diag))
    runner.summary["kink_time"] = res.kink
    runner.summary["error_rise_time"] = res.rise_time
    code = EXIT_OK
    for name, t_bd in (("logse", res.t_breakdown_logse),
                       ("jzme", res.t_breakdown_jzme)):
        if t_bd is not None:
            runner.summary[f"t_breakdown_{name}"] = t_bd
            code = EXIT_BREAKDOWN
    if cfg.output_emit_svg and len(res.ts) > 1:
        polyline_chart(runner.path("compare_widths.svg"),
                       [("logse", res.ts, res.width_logse),
                        ("jzme", res.ts, res.width_jzme)],
                       xlabel="t", ylabel="ensemble width")
        polyline_chart(runner.path("compare_error.svg"),
                       [("rel_l2", res.ts, res.rel_l2),
                        ("rel_l2_diag", res.ts, res.rel_l2_diag)],
                       xlabel="t", ylabel="relative L2 error")
    print(f"compare: {len(res.ts)} joint records, kink={res.kink}, "
          f"rise={res.rise_time}")
    return code


def cmd_breakdown_scan(runner: Runner) -> int:
    cfg = runner.cfg
    rows = breakdown_scan(cfg.scan_L_list, dx=cfg.grid_L / cfg.grid_N,
                          dt=cfg.time_dt, lam=cfg.physics_lambda, c0=runner.c0,
                          hbar=cfg.physics_hbar, mass=cfg.physics_mass,
                          b=cfg.ic_b)
    _write_csv(runner.path("breakdown.csv"), "L,N,t_breakdown,censored",
               [(r.L, r.N, r.t_breakdown, int(r.censored)) for r in rows])
    solid = [(r.L, r.t_breakdown) for r in rows if not r.censored]
    if cfg.output_emit_svg and len(solid) > 1:
        polyline_chart(runner.path("breakdown.svg"),
                       [("t_breakdown", [x for x, _ in solid],
                         [y for _, y in solid])],
                       xlabel="domain width L", ylabel="breakdown time",
                       logx=True)
    for r in rows:
        print(f"L={r.L:g} N={r.N}: "
              + ("censored" if r.censored else f"t_breakdown={r.t_breakdown:g}"))
    return EXIT_OK


def cmd_reg_sweep(runner: Runner) -> int:
    rows = regularization_sweep()
    _write_csv(runner.path("reg_sweep.csv"), "scheme,sigma,err", rows)
    if runner.cfg.output_emit_svg:
        by_scheme = {}
        for name, sigma, err in rows:
            by_scheme.setdefault(name, []).append((sigma, max(err, 1e-17)))
        polyline_chart(runner.path("reg_sweep.svg"),
                       [(name, [s for s, _ in pts], [e for _, e in pts])
                        for name, pts in by_scheme.items()],
                       xlabel="sigma", ylabel="relative L2(0,1] distance",
                       logy=True)
    print(f"reg-sweep: {len(rows)} rows")
    return EXIT_OK


def cmd_zero_pinning(runner: Runner) -> int:
    cfg = runner.cfg
    horizon = cfg.pinning_horizon * runner.t_b
    wres = propagate_wave(runner.initial_state(), horizon, runner.wave_config(),
                          record_every=cfg.time_record_every,
                          collect_frames=True, track_zeros=True,
                          zero_tol=cfg.pinning_formation_tol)
    formation = next(
        ((r.t, r.zero_positions) for r in wres.series.records
         if r.zero_positions is not None and len(r.zero_positions)),
        None,
    )
    if formation is None:
        pinning_report_csv([], runner.path("zero_pinning.csv"))
        runner.summary["zeros_formed"] = False
        print("zero-pinning: no zeros formed; vacuous report")
        return EXIT_OK
    t_form, zero_set = formation
    runner.summary["zeros_formed"] = True
    runner.summary["formation_time"] = t_form
    jres = propagate_density(from_wavefunction(runner.initial_state()), horizon,
                             runner.density_config(),
                             record_every=cfg.time_record_every,
                             collect_diag_frames=True,
                             with_coherence_length=False)
    wave_frames = [f for f in wres.frames if f[0] >= t_form - 1e-12]
    diag_frames = [f for f in jres.diag_frames if f[0] >= t_form - 1e-12]
    report = pinning_witness(wave_frames, runner.grid, diag_frames, runner.grid,
                             zero_set, horizon)
    pinning_report_csv(report, runner.path("zero_pinning.csv"))
    refill_rows = []
    for rec in report:
        try:
            r = refill_exponent(diag_frames, runner.grid, rec.x0_initial,
                                diag_frames[0][0], 0.2 * runner.t_b)
            refill_rows.append((rec.zero_id, r.exponent, r.residual,
                                int(r.flagged)))
        except ValueError:
            refill_rows.append((rec.zero_id, float("nan"), float("nan"), 1))
    _write_csv(runner.path("refill.csv"), "zero_id,exponent,residual,flagged",
               refill_rows)
    print(f"zero-pinning: {len(report)} zeros from t={t_form:g}; verdicts: "
          + ",".join(r.verdict for r in report))
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "compare": cmd_compare,
    "breakdown-scan": cmd_breakdown_scan,
    "reg-sweep": cmd_reg_sweep,
    "zero-pinning": cmd_zero_pinning,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="logdec",
        description="decoherence-model comparison runs (nonlinear wavefunction "
                    "vs master equation)",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="flat dotted-key config file")
    parser.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="override a config key")
    parser.add_argument("--out", help="output directory (default: output.dir)")
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, args.overrides)
    except (ConfigError, OSError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    runner = Runner(cfg, args.out or cfg.output_dir)
    try:
        code = COMMANDS[args.command](runner)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    runner.write_manifest()
    return code


if __name__ == "__main__":
    sys.exit(main())
