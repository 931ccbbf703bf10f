import csv

import numpy as np
import pytest

from sparselms import cli
from sparselms.config import (
    DEFAULT_LAMBDA_GRID,
    ExperimentConfig,
    InvalidConfigError,
    format_config,
    load_config,
    parse_config,
)
from sparselms.filters import Algorithm

SMALL_CONFIG = """
# tiny desk-scale experiment
n = 24
k_set = 2, 4
t_set = 200, 400
lambda_grid = 0.001, 0.008
algorithms = LMS, SLMS, LMS-RL1, SLMS-RL1
iterations = 200
runs = 3
root_seed = 9
k_fixed = 4
"""


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------


def test_defaults_match_standard_setup():
    cfg = ExperimentConfig().validate()
    assert cfg.n == 80
    assert cfg.snr_db == 10.0
    assert cfg.mu == 0.01
    assert cfg.delta_r == 0.05
    assert cfg.phi == 0.1
    assert cfg.runs == 100
    assert cfg.k_set == (4, 8, 16)
    assert cfg.t_set == (200.0, 400.0, 600.0)
    assert cfg.lambda_fixed == 8e-3
    for special in (8e-3, 4e-2, 8e-2):
        assert special in DEFAULT_LAMBDA_GRID
    assert len(DEFAULT_LAMBDA_GRID) == 12
    assert DEFAULT_LAMBDA_GRID[0] == 1e-4 and DEFAULT_LAMBDA_GRID[-1] == 1e-1


def test_parse_small_config():
    cfg = parse_config(SMALL_CONFIG)
    assert cfg.n == 24
    assert cfg.k_set == (2, 4)
    assert cfg.algorithms == (
        Algorithm.LMS,
        Algorithm.SLMS,
        Algorithm.LMS_RL1,
        Algorithm.SLMS_RL1,
    )
    assert cfg.runs == 3
    # untouched fields keep their defaults
    assert cfg.mu == 0.01


def test_format_parse_roundtrip():
    cfg = parse_config(SMALL_CONFIG)
    assert parse_config(format_config(cfg)) == cfg


@pytest.mark.parametrize(
    "text,match",
    [
        ("bogus_key = 3", "unknown config key"),
        ("n = eighty", "bad value"),
        ("exclude_diverged = maybe", "boolean"),
        ("n like 80", "expected 'key = value'"),
        ("lambda_grid = 0.1.2", "bad value"),
    ],
)
def test_parse_rejects_malformed_lines(text, match):
    with pytest.raises(InvalidConfigError, match=match):
        parse_config(text)


@pytest.mark.parametrize(
    "overrides",
    [
        dict(n=0),
        dict(k_set=(0,)),
        dict(k_set=(100,)),
        dict(phi=1.5),
        dict(t_set=(0.5,)),
        dict(mu=0.0),
        dict(delta_r=-1.0),
        dict(lambda_grid=(1e-3, 1e-3)),
        dict(lambda_grid=(1e-2, 1e-3)),
        dict(lambda_grid=(-1e-3, 1e-3)),
        dict(iterations=0),
        dict(runs=0),
        dict(tail_fraction=0.0),
        dict(tail_fraction=1.0),
        dict(algorithms=()),
        dict(k_fixed=99),
        dict(t_fixed=0.0),
        dict(lambda_fixed=-1.0),
    ],
)
def test_validate_rejects_out_of_range(overrides):
    import dataclasses

    cfg = dataclasses.replace(ExperimentConfig(), **overrides)
    with pytest.raises(InvalidConfigError):
        cfg.validate()


def test_load_config(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text(SMALL_CONFIG)
    assert load_config(path) == parse_config(SMALL_CONFIG)


# ---------------------------------------------------------------------------
# CLI plumbing
# ---------------------------------------------------------------------------


def _write_config(tmp_path, text=SMALL_CONFIG):
    path = tmp_path / "exp.cfg"
    path.write_text(text)
    return path


def test_cli_flag_overrides_config_file(tmp_path):
    path = _write_config(tmp_path)
    args = cli.build_parser().parse_args(
        ["run", "--config", str(path), "--runs", "7", "--no-exclude-diverged"]
    )
    cfg = cli.resolve_config(args)
    assert cfg.runs == 7
    assert cfg.n == 24
    assert cfg.exclude_diverged is False


def test_cli_paper_scale_flag(tmp_path):
    path = _write_config(tmp_path)
    args = cli.build_parser().parse_args(["run", "--config", str(path), "--paper-scale"])
    assert cli.resolve_config(args).runs == 1000


def test_run_subcommand_writes_outputs(tmp_path):
    cfg_path = _write_config(tmp_path)
    out = tmp_path / "out"
    rc = cli.main(
        ["run", "--config", str(cfg_path), "--out", str(out), "--dump-channels", "--workers", "2"]
    )
    assert rc == 0
    assert (out / "config.echo").exists()
    assert (out / "run.csv").exists()
    header = (out / "run.csv").read_text().splitlines()[0]
    assert header == "iteration,LMS,SLMS,LMS_RL1,SLMS_RL1"
    for name in ("LMS", "SLMS", "LMS_RL1", "SLMS_RL1"):
        dump = out / f"channels_{name}.csv"
        assert dump.exists()
        with open(dump, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["run_id", "tap_index", "value"]
        assert len(rows) == 1 + 3 * 4  # runs * k_fixed nonzeros
    # the echoed config reloads to the resolved configuration
    echoed = load_config(out / "config.echo")
    assert echoed == load_config(cfg_path)


def test_sweep_subcommand_writes_selection(tmp_path):
    cfg_path = _write_config(tmp_path)
    out = tmp_path / "out"
    rc = cli.main(["sweep", "--config", str(cfg_path), "--out", str(out)])
    assert rc == 0
    for k in (2, 4):
        lines = (out / f"sweep_K{k}.csv").read_text().splitlines()
        assert lines[0] == "iteration,lambda_0.001,lambda_0.008"
        assert len(lines) == 1 + 200
    selection = (out / "selection.txt").read_text()
    assert selection.startswith("selected_lambda = ")
    assert "steady_state_db" in selection


def test_compare_subcommand_writes_axis_csv(tmp_path):
    cfg_path = _write_config(tmp_path)
    out = tmp_path / "out"
    rc = cli.main(["compare", "--axis", "T", "--config", str(cfg_path), "--out", str(out)])
    assert rc == 0
    header = (out / "compare_T.csv").read_text().splitlines()[0]
    assert header.startswith("iteration,LMS_T200,LMS_T400,SLMS_T200")


def test_compare_is_byte_identical_across_workers(tmp_path):
    cfg_path = _write_config(tmp_path)
    outputs = []
    for name, workers in (("a", "1"), ("b", "1"), ("c", "4")):
        out = tmp_path / name
        rc = cli.main(
            ["compare", "--axis", "T", "--config", str(cfg_path), "--out", str(out), "--workers", workers]
        )
        assert rc == 0
        outputs.append((out / "compare_T.csv").read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]


def test_invalid_config_file_exits_2(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("phi = 2.0\n")
    assert cli.main(["run", "--config", str(bad)]) == 2


def test_missing_config_file_exits_2(tmp_path):
    assert cli.main(["run", "--config", str(tmp_path / "nope.cfg")]) == 2


def test_invalid_flag_value_exits_2(tmp_path):
    out = tmp_path / "out"
    assert cli.main(["run", "--out", str(out), "--phi", "42"]) == 2


def test_infeasible_selection_exits_3(tmp_path):
    cfg_path = _write_config(tmp_path)
    out = tmp_path / "out"
    rc = cli.main(
        ["sweep", "--config", str(cfg_path), "--out", str(out), "--lambda-grid", "10"]
    )
    assert rc == 3
    assert "selected_lambda = none" in (out / "selection.txt").read_text()


def test_reference_engine_cli_smoke(tmp_path):
    cfg_path = _write_config(tmp_path)
    out = tmp_path / "out"
    rc = cli.main(
        [
            "run",
            "--config",
            str(cfg_path),
            "--out",
            str(out),
            "--engine",
            "reference",
            "--iterations",
            "50",
            "--runs",
            "2",
            "--algorithms",
            "SLMS_RL1",
        ]
    )
    assert rc == 0
    assert (out / "run.csv").read_text().splitlines()[0] == "iteration,SLMS_RL1"


def test_selftest_subcommand():
    assert cli.main(["selftest"]) == 0
