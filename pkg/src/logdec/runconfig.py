"""Flat dotted-key run configuration: parsing, defaults, validation.

The file format is one `key = value` per line with `#` comments, chosen for
diff-ability and zero-dependency parsing. Defaults reproduce the reference
setup: L=30, N=2048, dt=0.05, Gaussian b=1, lam=hbar=m=1, shift_imag
sigma=16.
"""

from dataclasses import dataclass, field, fields


class ConfigError(ValueError):
    pass


def _parse_bool(s: str) -> bool:
    low = s.strip().lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _parse_float_list(s: str) -> tuple:
    return tuple(float(tok) for tok in s.split(",") if tok.strip())


@dataclass
class RunConfig:
    grid_L: float = 30.0
    grid_N: int = 2048
    time_dt: float = 0.05
    time_t_final: float = 4.0
    time_record_every: int = 1
    ic_kind: str = "gaussian"
    ic_b: float = 1.0
    ic_s: float = 1.0
    ic_x0: float = 0.0
    physics_lambda: float = 1.0
    physics_hbar: float = 1.0
    physics_mass: float = 1.0
    gamma_mode: str = "interp"
    gamma_c0: float = 0.0
    gamma_calibrate_c0: bool = False
    gamma_tabulate: bool = False
    reglog_scheme: str = "shift_imag"
    reglog_sigma: float = 16.0
    reglog_n_roots: int = 4
    reglog_p: float = 1.0
    backend: str = "both"
    output_dir: str = "out"
    output_emit_svg: bool = False
    output_snapshots: tuple = (0.0, 1.0, 2.0, 4.0)
    scan_L_list: tuple = (30.0, 60.0, 120.0, 240.0, 480.0)
    pinning_horizon: float = 1.0
    pinning_formation_tol: float = 1e-10


# dotted key -> (dataclass field, parser)
KEY_TABLE = {
    "grid.L": ("grid_L", float),
    "grid.N": ("grid_N", int),
    "time.dt": ("time_dt", float),
    "time.t_final": ("time_t_final", float),
    "time.record_every": ("time_record_every", int),
    "ic.kind": ("ic_kind", str),
    "ic.b": ("ic_b", float),
    "ic.s": ("ic_s", float),
    "ic.x0": ("ic_x0", float),
    "physics.lambda": ("physics_lambda", float),
    "physics.hbar": ("physics_hbar", float),
    "physics.mass": ("physics_mass", float),
    "gamma.mode": ("gamma_mode", str),
    "gamma.c0": ("gamma_c0", float),
    "gamma.lambda": ("physics_lambda", float),   # alias kept for the schedule keys
    "gamma.calibrate_c0": ("gamma_calibrate_c0", _parse_bool),
    "gamma.tabulate": ("gamma_tabulate", _parse_bool),
    "reglog.scheme": ("reglog_scheme", str),
    "reglog.sigma": ("reglog_sigma", float),
    "reglog.n_roots": ("reglog_n_roots", int),
    "reglog.p": ("reglog_p", float),
    "backend": ("backend", str),
    "output.dir": ("output_dir", str),
    "output.emit_svg": ("output_emit_svg", _parse_bool),
    "output.snapshots": ("output_snapshots", _parse_float_list),
    "scan.L_list": ("scan_L_list", _parse_float_list),
    "pinning.horizon": ("pinning_horizon", float),
    "pinning.formation_tol": ("pinning_formation_tol", float),
}

_CHOICES = {
    "ic_kind": ("gaussian", "lorentzian", "sech", "twin_gaussian"),
    "gamma_mode": ("interp", "integral"),
    "reglog_scheme": ("shift_imag", "root_average", "rational", "bare"),
    "backend": ("logse", "jzme", "both"),
}


def parse_assignment(line: str, where: str) -> tuple:
    if "=" not in line:
        raise ConfigError(f"{where}: expected 'key = value', got {line!r}")
    key, _, raw = line.partition("=")
    key = key.strip()
    raw = raw.strip()
    if key not in KEY_TABLE:
        raise ConfigError(f"{where}: unknown key {key!r}")
    attr, parser = KEY_TABLE[key]
    try:
        return attr, parser(raw)
    except ValueError as err:
        raise ConfigError(f"{where}: bad value for {key}: {err}") from None


def load_config(path=None, overrides=()) -> RunConfig:
    """Defaults, then the file, then --set overrides; validated at the end."""
    cfg = RunConfig()
    if path is not None:
        with open(path) as fh:
            for lineno, line in enumerate(fh, start=1):
                body = line.split("#", 1)[0].strip()
                if not body:
                    continue
                attr, value = parse_assignment(body, f"{path}:{lineno}")
                setattr(cfg, attr, value)
    for i, text in enumerate(overrides, start=1):
        attr, value = parse_assignment(text, f"--set #{i}")
        setattr(cfg, attr, value)
    validate(cfg)
    return cfg


def validate(cfg: RunConfig):
    def need(cond, msg):
        if not cond:
            raise ConfigError(msg)

    need(cfg.grid_L > 0, f"grid.L must be positive, got {cfg.grid_L}")
    need(cfg.grid_N >= 8 and cfg.grid_N % 2 == 0,
         f"grid.N must be even and >= 8, got {cfg.grid_N}")
    need(cfg.time_dt > 0, f"time.dt must be positive, got {cfg.time_dt}")
    need(cfg.time_t_final >= 0, "time.t_final must be non-negative")
    need(cfg.time_record_every >= 1, "time.record_every must be >= 1")
    need(cfg.ic_b > 0, "ic.b must be positive")
    need(cfg.ic_s >= 0, "ic.s must be non-negative")
    need(cfg.physics_lambda >= 0, "physics.lambda must be non-negative")
    need(cfg.physics_hbar > 0, "physics.hbar must be positive")
    need(cfg.physics_mass > 0, "physics.mass must be positive")
    need(cfg.reglog_sigma >= 0, "reglog.sigma must be non-negative")
    need(cfg.reglog_n_roots >= 1, "reglog.n_roots must be >= 1")
    need(cfg.reglog_p >= 1, "reglog.p must be >= 1")
    need(all(x >= 0 for x in cfg.output_snapshots),
         "output.snapshots must be non-negative times in units of t_b")
    need(len(cfg.scan_L_list) >= 1 and all(x > 0 for x in cfg.scan_L_list)
         and all(b > a for a, b in zip(cfg.scan_L_list, cfg.scan_L_list[1:])),
         "scan.L_list must be positive and strictly increasing")
    need(cfg.pinning_horizon > 0, "pinning.horizon must be positive")
    need(cfg.pinning_formation_tol > 0, "pinning.formation_tol must be positive")
    for attr, choices in _CHOICES.items():
        need(getattr(cfg, attr) in choices,
             f"{attr.replace('_', '.', 1)} must be one of {choices}, "
             f"got {getattr(cfg, attr)!r}")


def as_key_map(cfg: RunConfig) -> dict:
    """Resolved config as the dotted-key map stored in run.json."""
    reverse = {}
    for key, (attr, _) in KEY_TABLE.items():
        if key == "gamma.lambda":
            continue
        reverse[key] = getattr(cfg, attr)
    out = {}
    for key in sorted(reverse):
        v = reverse[key]
        out[key] = list(v) if isinstance(v, tuple) else v
    return out
