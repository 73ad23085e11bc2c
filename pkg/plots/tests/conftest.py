import random

import pytest


@pytest.fixture()
def sweep_csv(tmp_path):
    """A tournaments-style CSV with four rounds groups, rows unsorted."""
    rng = random.Random(7)
    rows = ["rounds,n_gambit_possibilities,mean_rank_diff"]
    for rounds in (11, 5, 9, 7):
        for _ in range(10):
            rows.append(f"{rounds},{rng.randint(2, 40)},{rng.uniform(-3.0, 0.5):.4f}")
    path = tmp_path / "tournaments.csv"
    path.write_text("\n".join(rows) + "\n")
    return path
