import csv
import json

import pytest

from swissgambit.cli import COMBINED_COLUMNS, main
from swissgambit.harness import GAMBIT_COLUMNS, TOURNAMENT_COLUMNS, ExperimentConfig, simulate_tournament
from swissgambit.trf import export_trf


def run_cli(*argv):
    return main(list(argv))


def test_help_exits_zero(capsys):
    assert run_cli("--help") == 0
    assert "swissgambit" in capsys.readouterr().out


def test_missing_command_is_usage_error(capsys):
    assert run_cli() == 1
    assert "error" in capsys.readouterr().err


def test_unknown_flag_is_usage_error(capsys):
    assert run_cli("run", "--frobnicate") == 1


def test_unknown_preset_is_usage_error(capsys):
    assert run_cli("run", "--preset", "nope") == 1


def test_invalid_config_is_usage_error(capsys):
    assert run_cli("run", "--players", "1", "--tournaments", "1") == 1
    assert "players" in capsys.readouterr().err


def test_mismatched_heuristic_is_usage_error(capsys):
    code = run_cli("run", "--model", "det", "--heuristic", "p-value", "--tournaments", "1")
    assert code == 1
    assert "requires" in capsys.readouterr().err


def test_unreachable_server_is_runtime_error(capsys):
    code = run_cli("--server", "http://127.0.0.1:9", "calibrate")
    assert code == 2
    assert "swissgambit" in capsys.readouterr().err


def test_calibrate_prints_parameters(capsys):
    assert run_cli("calibrate") == 0
    body = json.loads(capsys.readouterr().out)
    assert body["max_table_residual"] < 0.02
    assert body["sigma"] > 0


def test_presets_listing(capsys):
    assert run_cli("presets") == 0
    out = capsys.readouterr().out
    assert "rounds-sweep-det" in out
    assert "rounds-11" in out
    assert "smoke" in out


def test_simulate_table(capsys):
    assert run_cli("simulate", "--players", "8", "--rounds", "3") == 0
    out = capsys.readouterr().out
    config = ExperimentConfig(players=8, rounds=3)
    assert f"seed {config.tournament_seed(0)}" in out
    assert out.count("player") == 8


def test_simulate_json_format(capsys):
    assert run_cli("simulate", "--players", "8", "--rounds", "3", "--format", "json") == 0
    body = json.loads(capsys.readouterr().out)
    assert len(body["ranking"]) == 8
    assert body["course"]["total_rounds"] == 3


def test_simulate_trf_format_matches_library(capsys):
    assert run_cli(
        "simulate", "--players", "8", "--rounds", "3", "--tournament", "2", "--format", "trf"
    ) == 0
    out = capsys.readouterr().out
    config = ExperimentConfig(players=8, rounds=3)
    course, _ = simulate_tournament(config, config.tournament_seed(2))
    assert out.strip("\n") == export_trf(course).strip("\n")


def test_simulate_respects_seed_flag(capsys):
    assert run_cli("simulate", "--players", "8", "--rounds", "3", "--seed", "5") == 0
    out = capsys.readouterr().out
    config = ExperimentConfig(players=8, rounds=3, master_seed=5)
    assert f"seed {config.tournament_seed(0)}" in out


def test_run_single_campaign(tmp_path, capsys):
    out_root = tmp_path / "results"
    code = run_cli(
        "run", "--players", "8", "--rounds", "3", "--tournaments", "2",
        "--out", str(out_root),
    )
    assert code == 0
    printed = capsys.readouterr().out
    assert "campaign:" in printed
    assert "possibilities=" in printed

    campaign = out_root / "campaign"
    with open(campaign / "gambits.csv", newline="") as handle:
        header = next(csv.reader(handle))
    assert tuple(header) == GAMBIT_COLUMNS
    with open(campaign / "tournaments.csv", newline="") as handle:
        rows = list(csv.reader(handle))
    assert tuple(rows[0]) == TOURNAMENT_COLUMNS
    assert len(rows) == 3
    summary = json.loads((campaign / "summary.json").read_text())
    assert summary["config"]["tournaments"] == 2

    with open(out_root / "combined.csv", newline="") as handle:
        combined = list(csv.reader(handle))
    assert tuple(combined[0]) == COMBINED_COLUMNS
    assert len(combined) == 3
    assert combined[1][0] == "campaign"
    assert combined[1][1] == "3"  # rounds column


def test_run_preset_sweep(tmp_path, capsys):
    out_root = tmp_path / "sweep"
    code = run_cli(
        "run", "--preset", "rounds-sweep-det",
        "--players", "16", "--tournaments", "2", "--out", str(out_root),
    )
    assert code == 0
    for label in ("rounds-5", "rounds-7", "rounds-9", "rounds-11"):
        assert (out_root / label / "summary.json").exists()
    with open(out_root / "combined.csv", newline="") as handle:
        rows = list(csv.DictReader(handle))
    assert {row["label"] for row in rows} == {"rounds-5", "rounds-7", "rounds-9", "rounds-11"}
    assert {row["rounds"] for row in rows} == {"5", "7", "9", "11"}
    assert len(rows) == 8


def test_run_flags_override_preset(tmp_path):
    out_root = tmp_path / "smoke"
    code = run_cli(
        "run", "--preset", "smoke", "--tournaments", "1", "--out", str(out_root),
    )
    assert code == 0
    summary = json.loads((out_root / "smoke" / "summary.json").read_text())
    assert summary["config"]["tournaments"] == 1  # flag beats preset
    assert summary["config"]["players"] == 16  # preset beats default


def test_run_model_implies_heuristic(tmp_path):
    out_root = tmp_path / "prob"
    code = run_cli(
        "run", "--model", "prob", "--players", "8", "--rounds", "3",
        "--tournaments", "1", "--sample-size", "8", "--out", str(out_root),
    )
    assert code == 0
    summary = json.loads((out_root / "campaign" / "summary.json").read_text())
    assert summary["config"]["model"] == "probabilistic"
    assert summary["config"]["heuristic"] == "p-value"


def test_pair_command(tmp_path, capsys):
    config = ExperimentConfig(players=8, rounds=3)
    course, _ = simulate_tournament(config, config.tournament_seed(0))
    prefix = type(course)(course.players, course.rounds[:2], course.total_rounds)
    path = tmp_path / "standings.trf"
    path.write_text(export_trf(prefix))
    assert run_cli("pair", str(path)) == 0
    out = capsys.readouterr().out
    assert out.startswith("round 3")
    assert out.count(" - ") == 4


def test_pair_rejects_bad_file(tmp_path, capsys):
    path = tmp_path / "bad.trf"
    path.write_text("garbage\n")
    assert run_cli("pair", str(path)) == 1  # import rejects it as a bad request
    assert run_cli("pair", str(tmp_path / "missing.trf")) == 2


def test_pair_stdin(tmp_path, capsys, monkeypatch):
    import io

    config = ExperimentConfig(players=9, rounds=4)
    course, _ = simulate_tournament(config, config.tournament_seed(1))
    prefix = type(course)(course.players, course.rounds[:1], course.total_rounds)
    monkeypatch.setattr("sys.stdin", io.StringIO(export_trf(prefix)))
    assert run_cli("pair", "-") == 0
    out = capsys.readouterr().out
    assert "bye:" in out
