"""Tests for the command-line front end."""

import json
import os

import pytest

from hexswarm.cli import main, parse_and_validate


@pytest.fixture
def run_config(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({
        "m": 4, "hex_disc_radius": 1, "C_r": 20, "C_f": 0.2,
        "epsilon": 0.1, "max_ticks": 300, "seed": 5, "sample_every": 50,
    }))
    return path


@pytest.fixture
def sweep_config(tmp_path):
    path = tmp_path / "sweep.json"
    path.write_text(json.dumps({
        "m": 4, "hex_disc_radius": 1, "topology": ["complete"],
        "C_r": [20], "C_f": [0.0, 0.5], "epsilon": [0.0],
        "repeats": 2, "base_seed": 9, "max_ticks": 300, "sample_every": 50,
    }))
    return path


class TestParsing:
    def test_subcommand_and_flags(self, run_config, tmp_path):
        inv = parse_and_validate([
            "run", "--config", str(run_config), "--out", str(tmp_path / "o"),
            "--set", "C_f=0.025", "--workers", "3", "--seed", "8",
        ])
        assert inv.subcommand == "run"
        assert inv.overrides == [("C_f", 0.025)]
        assert inv.workers == 3
        assert inv.seed == 8

    def test_string_override_values(self):
        inv = parse_and_validate(["run", "--set", "topology=lattice:4"])
        assert inv.overrides == [("topology", "lattice:4")]

    def test_missing_subcommand_exits_2(self):
        assert main([]) == 2

    def test_unknown_flag_exits_2(self):
        assert main(["run", "--frobnicate"]) == 2

    def test_malformed_override(self):
        assert main(["validate", "--set", "oops"]) == 2


class TestValidate:
    def test_valid_run_config(self, run_config, capsys):
        assert main(["validate", "--config", str(run_config)]) == 0
        assert "valid run config" in capsys.readouterr().out

    def test_valid_sweep_config(self, sweep_config, capsys):
        assert main(["validate", "--config", str(sweep_config)]) == 0
        out = capsys.readouterr().out
        assert "valid sweep config" in out
        assert "4 runs" in out

    def test_writes_nothing(self, run_config, tmp_path, monkeypatch):
        workdir = tmp_path / "work"
        workdir.mkdir()
        monkeypatch.chdir(workdir)
        assert main(["validate", "--config", str(run_config)]) == 0
        assert os.listdir(workdir) == []

    def test_epsilon_out_of_range_exits_2(self, run_config, capsys):
        code = main(["validate", "--config", str(run_config), "--set", "epsilon=0.7"])
        assert code == 2
        assert "epsilon" in capsys.readouterr().err

    def test_unknown_key_named_in_error(self, run_config, capsys):
        code = main(["validate", "--config", str(run_config), "--set", "warp_factor=9"])
        assert code == 2
        assert "warp_factor" in capsys.readouterr().err

    def test_unreadable_config_exits_2(self, tmp_path, capsys):
        assert main(["validate", "--config", str(tmp_path / "missing.json")]) == 2
        assert "cannot read" in capsys.readouterr().err

    def test_non_json_config_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["validate", "--config", str(path)]) == 2


class TestRunSubcommand:
    def test_writes_record_and_trace(self, run_config, tmp_path, capsys):
        out = tmp_path / "results"
        assert main(["run", "--config", str(run_config), "--out", str(out)]) == 0
        record = json.loads((out / "run_record.json").read_text())
        assert record["config"]["m"] == 4
        trace = (out / "trace.log").read_text().strip().split("\n")
        assert len(trace) >= 4
        first = trace[0].split()
        assert first[0] == "0" and first[1] == "0"
        assert "run finished" in capsys.readouterr().out

    def test_set_override_applied(self, run_config, tmp_path):
        out = tmp_path / "o2"
        assert main([
            "run", "--config", str(run_config), "--out", str(out), "--set", "C_f=0.025",
        ]) == 0
        record = json.loads((out / "run_record.json").read_text())
        assert record["config"]["C_f"] == 0.025

    def test_seed_flag_overrides(self, run_config, tmp_path):
        out = tmp_path / "o3"
        assert main(["run", "--config", str(run_config), "--out", str(out), "--seed", "77"]) == 0
        record = json.loads((out / "run_record.json").read_text())
        assert record["config"]["seed"] == 77

    def test_record_matches_engine_run(self, run_config, tmp_path):
        # the CLI's tracing loop must not drift from the engine's run()
        from hexswarm.engine import SimConfig, run

        out = tmp_path / "o4"
        assert main(["run", "--config", str(run_config), "--out", str(out)]) == 0
        written = (out / "run_record.json").read_text()
        config = SimConfig(**json.loads(run_config.read_text()))
        assert written == run(config).to_json() + "\n"

    def test_run_rejects_sweep_config(self, sweep_config, capsys):
        assert main(["run", "--config", str(sweep_config)]) == 2
        assert "sweep" in capsys.readouterr().err

    def test_trace_covers_every_tick(self, run_config, tmp_path):
        out_run = tmp_path / "r"
        out_trace = tmp_path / "t"
        main(["run", "--config", str(run_config), "--out", str(out_run)])
        main(["trace", "--config", str(run_config), "--out", str(out_trace)])
        run_lines = (out_run / "trace.log").read_text().count("\n")
        trace_lines = (out_trace / "trace.log").read_text().count("\n")
        assert trace_lines > run_lines
        record = json.loads((out_trace / "run_record.json").read_text())
        assert trace_lines == 4 * (record["summary"]["terminal_tick"] + 1)


class TestSweepSubcommand:
    def test_writes_all_csvs(self, sweep_config, tmp_path, capsys):
        out = tmp_path / "sweep_out"
        assert main(["sweep", "--config", str(sweep_config), "--out", str(out)]) == 0
        for name in ("sweep_results.csv", "cell_summary.csv", "trajectories.csv"):
            assert (out / name).exists()
        lines = capsys.readouterr().out.strip().split("\n")
        assert len(lines) == 2  # one summary line per cell

    def test_worker_count_does_not_change_output(self, sweep_config, tmp_path):
        out1 = tmp_path / "w1"
        out2 = tmp_path / "w2"
        assert main(["sweep", "--config", str(sweep_config), "--out", str(out1),
                     "--workers", "1"]) == 0
        assert main(["sweep", "--config", str(sweep_config), "--out", str(out2),
                     "--workers", "2"]) == 0
        for name in ("sweep_results.csv", "cell_summary.csv", "trajectories.csv"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_repeat_invocation_identical_bytes(self, sweep_config, tmp_path):
        out1 = tmp_path / "a"
        out2 = tmp_path / "b"
        main(["sweep", "--config", str(sweep_config), "--out", str(out1)])
        main(["sweep", "--config", str(sweep_config), "--out", str(out2)])
        for name in ("sweep_results.csv", "cell_summary.csv", "trajectories.csv"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


class TestPresets:
    @pytest.mark.parametrize("name", ["smoke.json", "fig3.json", "fig4_5.json"])
    def test_sweep_presets_validate(self, name, capsys):
        assert main(["validate", "--config", f"configs/{name}"]) == 0
        assert "valid sweep config" in capsys.readouterr().out

    def test_base_preset_validates_as_run(self, capsys):
        assert main(["validate", "--config", "configs/base.json"]) == 0
        assert "valid run config" in capsys.readouterr().out

    def test_smoke_preset_runs(self, tmp_path):
        out = tmp_path / "smoke"
        assert main(["sweep", "--config", "configs/smoke.json", "--out", str(out)]) == 0
        assert (out / "cell_summary.csv").exists()
