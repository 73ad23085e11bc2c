"""Shared fixtures.

The two campaign fixtures are expensive (the probabilistic one runs for
several minutes) and are therefore session-scoped; only the acceptance
tests request them.
"""

import pytest

from swissgambit.harness import ExperimentConfig, run_campaign_data
from swissgambit.outcome import fitted_params


@pytest.fixture(scope="session")
def params():
    return fitted_params()


@pytest.fixture(scope="session")
def det_campaign():
    """Desk-scale deterministic baseline: 200 tournaments, defaults."""
    return run_campaign_data(ExperimentConfig(tournaments=200))


@pytest.fixture(scope="session")
def prob_campaign():
    """Desk-scale probabilistic campaign with all three sampling heuristics."""
    config = ExperimentConfig(
        tournaments=100,
        sample_size=50,
        model="probabilistic",
        heuristic="p-value",
    )
    return run_campaign_data(config, heuristics=("p-value", "mean", "median"))
