import json

import numpy as np
import pytest

from logdec.cli import main
from logdec.runconfig import ConfigError, load_config, as_key_map

FAST = [
    "--set", "grid.N=256", "--set", "time.t_final=0.5",
    "--set", "time.record_every=2",
]


def run_cli(*argv):
    return main(list(argv))


def test_load_config_defaults_match_reference_setup():
    cfg = load_config()
    assert (cfg.grid_L, cfg.grid_N, cfg.time_dt) == (30.0, 2048, 0.05)
    assert (cfg.ic_b, cfg.physics_lambda, cfg.reglog_sigma) == (1.0, 1.0, 16.0)
    assert cfg.backend == "both"


def test_load_config_file_and_overrides(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# comment\n"
        "grid.L = 15\n"
        "ic.kind = sech   # trailing comment\n"
        "\n"
        "gamma.mode = integral\n"
    )
    cfg = load_config(path, ["grid.N=512", "ic.kind=lorentzian"])
    assert cfg.grid_L == 15.0
    assert cfg.grid_N == 512
    assert cfg.ic_kind == "lorentzian"
    assert cfg.gamma_mode == "integral"


@pytest.mark.parametrize("line,msg", [
    ("grid.M = 3", "unknown key"),
    ("grid.N = twelve", "bad value"),
    ("grid.N", "expected"),
])
def test_config_parse_errors(tmp_path, line, msg):
    path = tmp_path / "bad.cfg"
    path.write_text(line + "\n")
    with pytest.raises(ConfigError, match=msg):
        load_config(path)


@pytest.mark.parametrize("override", [
    "grid.N=257", "grid.L=-3", "time.dt=0", "backend=mixed",
    "reglog.p=0.2", "scan.L_list=30,20",
])
def test_config_validation(override):
    with pytest.raises(ConfigError):
        load_config(None, [override])


def test_as_key_map_round_trip():
    keys = as_key_map(load_config())
    assert keys["grid.L"] == 30.0
    assert keys["output.snapshots"] == [0.0, 1.0, 2.0, 4.0]
    assert "gamma.lambda" not in keys


def test_cli_bad_config_exit_code(tmp_path, capsys):
    assert run_cli("run", "--set", "grid.N=13", "--out", str(tmp_path)) == 1
    assert "config error" in capsys.readouterr().err


def test_cli_run_artifacts_and_determinism(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    args = ["run", *FAST, "--set", "output.snapshots=0,0.25",
            "--set", "backend=both"]
    assert run_cli(*args, "--out", str(out1)) == 0
    assert run_cli(*args, "--out", str(out2)) == 0
    for name in ("series.csv", "series_logse.csv", "series_jzme.csv",
                 "snapshot_logse_t0.csv", "snapshot_logse_t0.25.csv",
                 "snapshot_jzme_t0.csv", "run.json"):
        assert (out1 / name).exists(), name
    # byte-identical data files on identical config
    for name in ("series.csv", "series_jzme.csv", "snapshot_logse_t0.25.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
    doc = json.loads((out1 / "run.json").read_text())
    assert doc["version"]
    assert doc["config"]["grid.N"] == 256
    assert "started" in doc["metadata"] and "finished" in doc["metadata"]
    header = (out1 / "series_logse.csv").read_text().splitlines()[0]
    assert header == "t,width,coherence_length,norm,kinetic_energy,visibility,rel_l2_error"
    snap = (out1 / "snapshot_logse_t0.25.csv").read_text().splitlines()
    assert snap[0] == "x,re_a,im_a,intensity"
    assert len(snap) == 257


def test_cli_run_t_final_zero_metadata_only(tmp_path):
    assert run_cli("run", "--set", "grid.N=256", "--set", "time.t_final=0",
                   "--set", "backend=logse", "--out", str(tmp_path)) == 0
    lines = (tmp_path / "series.csv").read_text().splitlines()
    assert len(lines) == 1  # header only
    assert (tmp_path / "run.json").exists()


def test_cli_run_gamma_tabulation(tmp_path):
    assert run_cli("run", *FAST, "--set", "backend=logse",
                   "--set", "gamma.tabulate=true", "--out", str(tmp_path)) == 0
    lines = (tmp_path / "gamma.csv").read_text().splitlines()
    assert lines[0] == "t,gamma_interp,gamma_integral"
    assert len(lines) == 201
    first = [float(v) for v in lines[1].split(",")]
    assert first[0] == pytest.approx(0.01)
    # both forms start out as 2*lam*t
    assert first[1] == pytest.approx(0.02, rel=0.2)
    assert first[2] == pytest.approx(0.02, rel=0.05)


def test_cli_run_breakdown_exit_code(tmp_path):
    # an intentionally savage configuration: huge coupling, coarse step
    code = run_cli("run", "--set", "grid.N=256", "--set", "grid.L=15",
                   "--set", "time.dt=0.5", "--set", "time.t_final=20",
                   "--set", "physics.lambda=40", "--set", "gamma.c0=200",
                   "--set", "backend=logse", "--out", str(tmp_path))
    assert code == 2
    doc = json.loads((tmp_path / "run.json").read_text())
    assert doc["summary"]["t_breakdown_logse"] > 0


def test_cli_compare(tmp_path):
    assert run_cli("compare", *FAST, "--set", "output.emit_svg=true",
                   "--out", str(tmp_path)) == 0
    lines = (tmp_path / "compare.csv").read_text().splitlines()
    assert lines[0] == "t,width_logse,width_jzme,rel_l2_error,rel_l2_error_diag"
    rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    assert rows[0, 3] < 1e-12          # identical at t = 0
    assert np.all(rows[:, 1] > 0) and np.all(rows[:, 2] > 0)
    assert (tmp_path / "compare_widths.svg").exists()
    doc = json.loads((tmp_path / "run.json").read_text())
    assert "kink_time" in doc["summary"]


def test_cli_compare_requires_both(tmp_path):
    assert run_cli("compare", *FAST, "--set", "backend=logse",
                   "--out", str(tmp_path)) == 1


def test_cli_reg_sweep(tmp_path):
    assert run_cli("reg-sweep", "--set", "output.emit_svg=true",
                   "--out", str(tmp_path)) == 0
    lines = (tmp_path / "reg_sweep.csv").read_text().splitlines()
    assert lines[0] == "scheme,sigma,err"
    assert len(lines) == 1 + 3 * 33
    assert (tmp_path / "reg_sweep.svg").exists()


def test_cli_breakdown_scan_small(tmp_path, monkeypatch):
    monkeypatch.setenv("LOGDEC_THREADS", "1")
    assert run_cli("breakdown-scan", "--set", "scan.L_list=15,30",
                   "--set", "grid.L=15", "--set", "grid.N=256",
                   "--out", str(tmp_path)) == 0
    lines = (tmp_path / "breakdown.csv").read_text().splitlines()
    assert lines[0] == "L,N,t_breakdown,censored"
    assert len(lines) == 3
    t1 = float(lines[1].split(",")[2])
    t2 = float(lines[2].split(",")[2])
    assert t1 < t2  # wider domain postpones breakdown


def test_cli_zero_pinning_vacuous_on_gaussian(tmp_path):
    assert run_cli("zero-pinning", *FAST, "--set", "ic.kind=gaussian",
                   "--out", str(tmp_path)) == 0
    lines = (tmp_path / "zero_pinning.csv").read_text().splitlines()
    assert lines[0].startswith("zero_id,")
    assert len(lines) == 1
    doc = json.loads((tmp_path / "run.json").read_text())
    assert doc["summary"]["zeros_formed"] is False
