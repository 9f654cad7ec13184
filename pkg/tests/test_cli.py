"""命令行：子命令输出、退出码与可复现性"""

import pytest
import yaml

from omfc_budget import __version__
from omfc_budget.cli import main
from omfc_budget.cli.commands import parse_sweep_values
from omfc_budget.cli.output import read_table
from omfc_budget.errors import ConfigError
from omfc_budget.schemes import COMPONENT_KEYS

SMALL_GRID = ["--fmin", "1", "--fmax", "1000", "--points", "20"]


def write_yaml(path, document) -> str:
    path.write_text(yaml.safe_dump(document), encoding="utf-8")
    return str(path)


def run_twice(tmp_path, command, *extra) -> tuple[bytes, bytes]:
    """同一参数运行两次，返回两份输出的字节"""
    outputs = []
    for i in range(2):
        out = tmp_path / f"{command}_{i}.csv"
        code = main([command, *SMALL_GRID, "--out", str(out), *extra])
        assert code == 0
        outputs.append(out.read_bytes())
    return outputs[0], outputs[1]


class TestCommands:
    def test_convert(self, tmp_path):
        out = tmp_path / "convert.csv"
        assert main(["convert", *SMALL_GRID, "--out", str(out)]) == 0
        frame = read_table(out)
        assert list(frame.columns) == [
            "frequency_Hz",
            "conversion_abs",
            "conversion_arg_rad",
            "eps_omfc",
            "S_th_vacuum_units",
            "squeeze_dB",
        ]
        assert len(frame) == 20
        assert frame["eps_omfc"].iloc[0] == pytest.approx(0.02, rel=1e-3)

    def test_sensitivity(self, tmp_path):
        out = tmp_path / "sens.csv"
        assert main(["sensitivity", *SMALL_GRID, "--scheme", "fd_squeezing", "--out", str(out)]) == 0
        frame = read_table(out)
        assert list(frame.columns) == [
            "frequency_Hz",
            "S_total_per_Hz",
            "S_quantum_shot_per_Hz",
            "S_quantum_backaction_per_Hz",
            "S_sql_per_Hz",
            "S_baseline_per_Hz",
        ]
        assert frame["frequency_Hz"].is_monotonic_increasing
        assert (frame["S_total_per_Hz"] > 0).all()

    def test_budget_has_all_components(self, tmp_path):
        out = tmp_path / "budget.csv"
        assert main(["budget", *SMALL_GRID, "--out", str(out)]) == 0
        frame = read_table(out)
        for key in COMPONENT_KEYS:
            assert f"S_{key}_per_Hz" in frame.columns
        summed = sum(frame[f"S_{key}_per_Hz"] for key in COMPONENT_KEYS)
        assert (abs(frame["S_total_per_Hz"] - summed) <= 1e-11 * frame["S_total_per_Hz"]).all()

    def test_criterion(self, tmp_path):
        out = tmp_path / "criterion.csv"
        assert main(["criterion", "--out", str(out)]) == 0
        frame = read_table(out).set_index("scheme")
        assert list(frame.index) == ["fd_squeezing", "variational"]
        assert frame.loc["fd_squeezing", "verdict"] == "MARGINAL"
        assert frame.loc["variational", "verdict"] == "PASS"

    def test_stdout_output(self, capsys):
        assert main(["convert", "--points", "5"]) == 0
        text = capsys.readouterr().out
        lines = text.splitlines()
        assert lines[0].startswith("# config.grid.f_min_hz = ")
        assert f'# meta.version = "{__version__}"' in lines
        assert '# meta.command = "convert"' in lines
        assert lines[-6].startswith("frequency_Hz,")

    def test_version(self, capsys):
        assert main(["--version"]) == 0
        assert __version__ in capsys.readouterr().out


class TestReproducibility:
    @pytest.mark.parametrize(
        ("command", "extra"),
        [
            ("convert", []),
            ("sensitivity", []),
            ("budget", []),
            ("criterion", []),
            ("sweep", ["--param", "omfc.round_trip_loss", "--values", "0,1e-5", "--table", "convert"]),
            ("sweep", ["--param", "omfc.temperature", "--values", "1,2", "--table", "sensitivity"]),
        ],
    )
    def test_byte_identical(self, tmp_path, command, extra):
        first, second = run_twice(tmp_path, command, *extra)
        assert first == second

    def test_header_reproduces_run(self, tmp_path):
        first = tmp_path / "first.csv"
        second = tmp_path / "second.csv"
        assert main(["budget", *SMALL_GRID, "--scheme", "fd_squeezing", "--out", str(first)]) == 0
        assert main(["budget", "--config", str(first), "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_sweep_stacks_blocks(self, tmp_path):
        out = tmp_path / "sweep.csv"
        argv = ["sweep", *SMALL_GRID, "--param", "omfc.temperature", "--values", "1,2,4", "--table", "convert"]
        assert main([*argv, "--out", str(out)]) == 0
        frame = read_table(out)
        assert list(frame.columns)[0] == "sweep_value"
        assert len(frame) == 3 * 20
        assert list(frame["sweep_value"].unique()) == [1, 2, 4]
        thermal = frame.groupby("sweep_value")["S_th_vacuum_units"].first()
        assert thermal[4] == pytest.approx(4 * thermal[1])


class TestTune:
    def test_converged_run_writes_summary_and_trace(self, tmp_path):
        config = write_yaml(
            tmp_path / "tune.yaml",
            {"tune": {"variables": ["theta_dc"], "objective": "angle_residual", "band_points": 10}},
        )
        out = tmp_path / "tune.csv"
        assert main(["tune", "--config", config, *SMALL_GRID, "--out", str(out)]) == 0

        summary = read_table(out)
        assert summary.loc[0, "status"] == "CONVERGED"
        assert summary.loc[0, "tuned_objective"] <= summary.loc[0, "initial_objective"]
        assert "theta_dc_tuned_rad" in summary.columns

        trace = read_table(tmp_path / "tune_trace.csv")
        assert list(trace.columns) == ["eval_index", "theta_dc_rad", "objective", "best_objective"]
        assert len(trace) == summary.loc[0, "evaluations"]
        assert trace["best_objective"].is_monotonic_decreasing

    def test_explicit_trace_path(self, tmp_path):
        config = write_yaml(tmp_path / "tune.yaml", {"tune": {"variables": ["theta_dc"], "max_evals": 5}})
        trace = tmp_path / "nested" / "trace.csv"
        main(["tune", "--config", config, *SMALL_GRID, "--out", str(tmp_path / "t.csv"), "--trace", str(trace)])
        assert len(read_table(trace)) == 5

    def test_not_converged_exit_code(self, tmp_path):
        config = write_yaml(tmp_path / "tune.yaml", {"tune": {"max_evals": 1}})
        out = tmp_path / "tune.csv"
        assert main(["tune", "--config", config, *SMALL_GRID, "--out", str(out)]) == 4
        summary = read_table(out)
        assert summary.loc[0, "status"] == "NOT_CONVERGED"
        assert summary.loc[0, "evaluations"] == 1

    def test_tune_is_deterministic(self, tmp_path):
        config = write_yaml(
            tmp_path / "tune.yaml",
            {"tune": {"variables": ["detuning", "bandwidth"], "max_evals": 20, "scan_points": 2}},
        )
        outputs = []
        for i in range(2):
            out = tmp_path / f"tune_{i}.csv"
            assert main(["tune", "--config", config, *SMALL_GRID, "--out", str(out)]) in (0, 4)
            outputs.append((out.read_bytes(), (tmp_path / f"tune_{i}_trace.csv").read_text(encoding="utf-8")))
        assert outputs[0][0] == outputs[1][0]
        body = [line for line in outputs[0][1].splitlines() if not line.startswith("#")]
        assert body == [line for line in outputs[1][1].splitlines() if not line.startswith("#")]

    def test_reference_outside_grid(self, tmp_path):
        argv = ["tune", "--fmin", "10", "--fmax", "100", "--points", "10", "--out", str(tmp_path / "t.csv")]
        assert main(argv) == 2


class TestErrors:
    def test_unknown_config_key(self, tmp_path):
        config = write_yaml(tmp_path / "bad.yaml", {"omfc": {"bogus": 1}})
        assert main(["budget", "--config", config]) == 2

    def test_missing_config(self, tmp_path):
        assert main(["budget", "--config", str(tmp_path / "absent.yaml")]) == 2

    def test_single_point_grid(self):
        assert main(["budget", "--points", "1"]) == 2

    def test_unknown_scheme(self):
        assert main(["budget", "--scheme", "squeezed_light_v2"]) == 2

    def test_unknown_sweep_key(self, tmp_path):
        argv = ["sweep", "--param", "omfc.bogus", "--values", "1,2", "--out", str(tmp_path / "s.csv")]
        assert main(argv) == 2

    def test_missing_subcommand(self):
        assert main([]) == 2

    def test_numerical_failure(self, tmp_path):
        config = write_yaml(tmp_path / "lossy.yaml", {"omfc": {"round_trip_loss": 6e-4}})
        assert main(["convert", "--config", config, "--points", "5"]) == 3


class TestSweepValues:
    def test_parse(self):
        assert parse_sweep_values("1e5, 2,abc") == [100000.0, 2, "abc"]
        assert parse_sweep_values("null,true") == [None, True]

    def test_empty(self):
        with pytest.raises(ConfigError):
            parse_sweep_values(" , ")
