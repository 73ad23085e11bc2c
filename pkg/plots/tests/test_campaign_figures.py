"""End-to-end figures from a real campaign sweep.

Runs the simulation CLI as a subprocess (the only coupling is the
documented CSV schema), then renders the two headline figures from the
combined sweep table: gambit possibilities as a boxen plot and mean
rank difference as a violin plot, one group per swept rounds value.
"""

import subprocess
import sys

import pytest

from gambitplots.cli import main
from gambitplots.render import PlotSpec, render


@pytest.fixture(scope="module")
def combined_csv(tmp_path_factory):
    out = tmp_path_factory.mktemp("campaign")
    cmd = [
        sys.executable, "-m", "swissgambit.cli", "run",
        "--preset", "rounds-sweep-det",
        "--players", "16", "--tournaments", "10",
        "--out", str(out),
    ]
    proc = subprocess.run(cmd, capture_output=True, text=True, timeout=600)
    assert proc.returncode == 0, proc.stderr
    path = out / "combined.csv"
    assert path.is_file()
    return path


def test_boxen_possibilities_by_rounds(combined_csv, tmp_path):
    res = render(
        PlotSpec(combined_csv, "n_gambit_possibilities", "rounds", "boxen",
                 tmp_path / "possibilities.png")
    )
    assert res.groups == (5, 7, 9, 11)
    assert res.out_path.stat().st_size > 0


def test_violin_mean_rank_diff_by_rounds(combined_csv, tmp_path):
    res = render(
        PlotSpec(combined_csv, "mean_rank_diff", "rounds", "violin",
                 tmp_path / "rank_diff.png")
    )
    assert res.groups == (5, 7, 9, 11)
    assert res.out_path.stat().st_size > 0


def test_cli_renders_from_campaign_output(combined_csv, tmp_path, capsys):
    out = tmp_path / "cli.png"
    code = main(
        ["--in", str(combined_csv), "--metric", "n_gambit_possibilities",
         "--by", "rounds", "--kind", "violin", "--out", str(out)]
    )
    assert code == 0
    assert out.stat().st_size > 0
    assert "5, 7, 9, 11" in capsys.readouterr().out
