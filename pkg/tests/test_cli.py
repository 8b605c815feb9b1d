"""CLI subcommands, config parsing, outputs, and exit codes."""

import json

import numpy as np
import pytest

import photonfcs.sweep as sweep_mod
from photonfcs import cli
from photonfcs.errors import SolverError
from photonfcs.sweep import Axis, SweepSpec, run_sweep, write_sweep_csv


def write_config(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


COUPLED_MODEL = """
[model]
kind = coupled_atoms
omega = 0.5
j = 0.1
gamma = 1.0
gamma_phi = 0.1
"""


def test_scgf_command(tmp_path, capsys):
    from photonfcs import CoupledAtomsParams, build_coupled_atoms, scgf

    cfg = write_config(tmp_path / "c.ini", COUPLED_MODEL + "\n[scgf]\ns = 0.4, -0.2\n")
    rc = cli.main(["scgf", "--config", cfg])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["s"] == [0.4, -0.2]
    model, scheme = build_coupled_atoms(CoupledAtomsParams(0.5, 0.1, 1.0, 0.1))
    assert payload["theta"] == pytest.approx(scgf(model, scheme, [0.4, -0.2]), abs=1e-12)


def test_scgf_wrong_field_count_is_config_error(tmp_path, capsys):
    cfg = write_config(tmp_path / "c.ini", COUPLED_MODEL + "\n[scgf]\ns = 0.4\n")
    assert cli.main(["scgf", "--config", cfg]) == cli.EXIT_CONFIG


def test_witness_command(tmp_path, capsys):
    cfg = write_config(tmp_path / "c.ini", COUPLED_MODEL)
    rc = cli.main(["witness", "--config", cfg, "--out", str(tmp_path / "out")])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    for key in ("kappa10", "kappa11", "m2", "m3_direct", "m3_appendix"):
        assert key in payload
    assert (tmp_path / "out" / "witness.json").exists()


def test_missing_config_file_exit_code():
    assert cli.main(["witness", "--config", "/nonexistent.ini"]) == cli.EXIT_CONFIG


def test_bad_model_parameter_exit_code(tmp_path):
    cfg = write_config(tmp_path / "c.ini", "[model]\nkind = coupled_atoms\nbogus = 1\n")
    assert cli.main(["witness", "--config", cfg]) == cli.EXIT_CONFIG


SWEEP_SECTION = """
[sweep]
axis1 = omega, 0.2, 1.0, 5
axis2 = gamma_phi, 0.0, 0.4, 4
variant = both

[output]
prefix = pt
"""


def test_sweep_command_outputs(tmp_path, capsys):
    cfg = write_config(tmp_path / "c.ini", COUPLED_MODEL + SWEEP_SECTION)
    out = tmp_path / "out"
    rc = cli.main(["sweep", "--config", cfg, "--out", str(out), "--svg"])
    assert rc == 0
    csv_text = (out / "pt.csv").read_text().splitlines()
    assert csv_text[0].startswith("# photonfcs sweep csv schema v1")
    assert csv_text[1].split(",")[:2] == ["omega", "gamma_phi"]
    assert len(csv_text) == 2 + 5 * 4
    assert all(line.endswith(",ok") for line in csv_text[2:])
    manifest = json.loads((out / "pt.json").read_text())
    assert manifest["tool"] == "photonfcs"
    assert "git_hash" in manifest and "wall_time_s" in manifest
    assert (out / "pt_appendix.svg").exists()
    assert (out / "pt_direct.svg").exists()
    svg = (out / "pt_appendix.svg").read_text()
    assert svg.startswith("<svg") and "</svg>" in svg


def test_sweep_threads_match_serial(tmp_path):
    spec = SweepSpec(
        kind="coupled_atoms",
        fixed={"j": 0.1, "gamma": 1.0},
        axis1=Axis("omega", 0.3, 0.9, 3),
        axis2=Axis("gamma_phi", 0.0, 0.2, 3),
    )
    serial = run_sweep(spec, threads=1)
    parallel = run_sweep(spec, threads=2)
    assert serial.rows == parallel.rows


def test_sweep_failure_budget_exit_code(tmp_path, monkeypatch, capsys):
    calls = {"n": 0}
    real = sweep_mod.cumulants_fd

    def flaky(model, scheme, step=1e-3):
        calls["n"] += 1
        if calls["n"] % 3 == 0:  # one third of grid points fail
            raise SolverError("injected failure")
        return real(model, scheme, step=step)

    monkeypatch.setattr(sweep_mod, "cumulants_fd", flaky)
    cfg = write_config(tmp_path / "c.ini", COUPLED_MODEL + SWEEP_SECTION)
    out = tmp_path / "out"
    rc = cli.main(["sweep", "--config", cfg, "--out", str(out)])
    assert rc == cli.EXIT_SOLVER_BUDGET
    rows = (out / "pt.csv").read_text().splitlines()[2:]
    assert sum(1 for r in rows if r.endswith("error:SolverError")) == calls["n"] // 3


def test_sweep_grid_accessor_and_failed_rows_nan():
    spec = SweepSpec(
        kind="circuit",
        fixed={"gamma_phi": 0.1},
        axis1=Axis("zeta", 0.0, 1.5, 3),
        axis2=Axis("delta", 0.0, 3.0, 3),
    )
    res = run_sweep(spec)
    grid = res.grid("m3_appendix")
    assert grid.shape == (3, 3)
    assert np.isfinite(grid).all()


VALIDATE_SECTION = """
[trajectories]
t_final = 60
n_traj = 400
seed = 31
dump_samples = true
"""


def test_validate_command_pass(tmp_path, capsys):
    cfg = write_config(
        tmp_path / "c.ini",
        "[model]\nkind = driven_qubit\nomega = 0.5\ngamma = 1.0\n" + VALIDATE_SECTION,
    )
    out = tmp_path / "out"
    rc = cli.main(["validate", "--config", cfg, "--out", str(out)])
    payload = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert payload["passed"] is True
    assert (out / "validate_samples.csv").exists()
    names = {e["name"] for e in payload["entries"]}
    assert names == {"kappa1[1]", "kappa2[11]"}


def test_validate_dark_model_passes_with_zeros(tmp_path, capsys):
    cfg = write_config(
        tmp_path / "c.ini",
        "[model]\nkind = driven_qubit\nomega = 0.0\ngamma = 1.0\n" + VALIDATE_SECTION,
    )
    rc = cli.main(["validate", "--config", cfg])
    payload = json.loads(capsys.readouterr().out)
    assert rc == 0
    for entry in payload["entries"]:
        assert entry["spectral"] == pytest.approx(0.0, abs=1e-10)
        assert entry["empirical"] == pytest.approx(0.0, abs=1e-12)


def test_validate_mismatched_model_fails():
    from photonfcs import TrajectoryConfig, build_driven_qubit
    from photonfcs.validate import run_validate

    model, scheme = build_driven_qubit(0.5, 1.0)
    wrong, wrong_scheme = build_driven_qubit(0.5, 1.5)
    cfg = TrajectoryConfig(t_final=150.0, n_traj=3000, seed=5)
    report, _ = run_validate(model, scheme, cfg, mc_model=wrong, mc_scheme=wrong_scheme)
    assert report.passed is False


def test_validate_threads_deterministic():
    from photonfcs import TrajectoryConfig, build_driven_qubit
    from photonfcs.validate import run_validate

    model, scheme = build_driven_qubit(0.5, 1.0)
    cfg = TrajectoryConfig(t_final=30.0, n_traj=120, seed=6)
    r1, s1 = run_validate(model, scheme, cfg, threads=1)
    r2, s2 = run_validate(model, scheme, cfg, threads=3)
    assert s1 == s2


RATE_SECTION = """
[rate_function]
x_min = 0.0
x_max = 0.3
n_points = 4
bracket = -10, 20
channel = D1
"""


def test_rate_function_command(tmp_path, capsys):
    cfg = write_config(tmp_path / "c.ini", COUPLED_MODEL + RATE_SECTION)
    out = tmp_path / "out"
    rc = cli.main(["rate-function", "--config", cfg, "--out", str(out)])
    assert rc == 0
    lines = (out / "rate_function.csv").read_text().splitlines()
    assert lines[1] == "x,phi,argmin_s"
    assert len(lines) == 2 + 4
    phis = [float(line.split(",")[1]) for line in lines[2:]]
    assert all(p <= 1e-12 for p in phis)


def test_heatmap_svg_well_formed(tmp_path):
    import xml.etree.ElementTree as ET

    from photonfcs.heatmap import write_heatmap_svg

    grid = np.array([[1.0, -0.5, 0.0], [np.nan, 0.25, -1.0]])
    path = tmp_path / "h.svg"
    write_heatmap_svg(path, grid, [0.0, 1.0], [0.0, 0.5, 1.0], "a", "b", "demo")
    root = ET.parse(path).getroot()
    assert root.tag.endswith("svg")
    rects = [el for el in root.iter() if el.tag.endswith("rect")]
    assert len(rects) >= grid.size


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--version"])
    assert exc.value.code == 0
    assert "photonfcs" in capsys.readouterr().out


def test_degenerate_single_point_axes():
    # 1x1 grid: one row, and with J=0 the cross-cumulant vanishes
    spec = SweepSpec(
        kind="coupled_atoms",
        fixed={"j": 0.0, "gamma": 1.0},
        axis1=Axis("omega", 0.5, 0.5, 1),
        axis2=Axis("gamma_phi", 0.1, 0.1, 1),
    )
    res = run_sweep(spec)
    assert len(res.rows) == 1
    assert res.rows[0]["status"] == "ok"
    assert abs(res.rows[0]["kappa11"]) <= 1e-8


def test_validate_exit_code_on_failure(tmp_path, capsys):
    # a 5/gamma window is shorter than the photon anticorrelation tail, so the
    # count variance is biased far above its asymptotic value and the 3-sigma
    # gate must fail deterministically
    cfg = write_config(
        tmp_path / "c.ini",
        "[model]\nkind = driven_qubit\nomega = 0.5\ngamma = 1.0\n"
        "[trajectories]\nt_final = 5\nn_traj = 5000\nseed = 1\n",
    )
    rc = cli.main(["validate", "--config", cfg])
    payload = json.loads(capsys.readouterr().out)
    assert rc == cli.EXIT_VALIDATION
    assert payload["passed"] is False


def test_csv_float_format_roundtrip(tmp_path):
    spec = SweepSpec(
        kind="driven_qubit",
        fixed={},
        axis1=Axis("omega", 0.1, 0.7, 3),
        axis2=Axis("gamma", 0.5, 1.5, 2),
    )
    res = run_sweep(spec)
    path = tmp_path / "x.csv"
    write_sweep_csv(res, path)
    lines = path.read_text().splitlines()
    first = lines[2].split(",")
    # repr round-trip: parsing the cell reproduces the float exactly
    assert float(first[2]) == res.rows[0]["kappa10"]
