"""Simulation laboratory for the Swiss Gambit.

Monte Carlo study of whether deliberately losing or drawing an early
round of a Swiss-system tournament can buy a better final rank, under a
deterministic and a probabilistic match-outcome model.
"""

__version__ = "0.1.0"

from .core import Color, Course, GameResult, PairedGame, Player, Round, validate_course
from .engine import TournamentState, state_from_course
from .gambit import (
    DecisionPoint,
    GambitContext,
    GambitVerdict,
    ResultOption,
    decide_deterministic,
    decide_expected_value,
    decide_mean,
    decide_median,
    decide_pvalue,
    expected_final_rank,
    find_decision_points,
)
from .harness import (
    ExperimentConfig,
    GambitRecord,
    ImpactReport,
    aggregate,
    run_campaign,
    run_campaign_data,
    scan_gambits,
    simulate_tournament,
)
from .outcome import SurrogateParams, deterministic_result, distribution, fit_surrogate, fitted_params
from .pairing import PairingInfeasibleError, PairingSystem, pair_round
from .ranking import Ranking, final_ranking, ground_truth, kendall_tau, kendall_tau_difference
from .stats import welch_one_tailed
from .trf import export_trf, import_trf

__all__ = [
    "__version__",
    "Color",
    "Course",
    "GameResult",
    "PairedGame",
    "Player",
    "Round",
    "validate_course",
    "TournamentState",
    "state_from_course",
    "DecisionPoint",
    "GambitContext",
    "GambitVerdict",
    "ResultOption",
    "decide_deterministic",
    "decide_expected_value",
    "decide_mean",
    "decide_median",
    "decide_pvalue",
    "expected_final_rank",
    "find_decision_points",
    "ExperimentConfig",
    "GambitRecord",
    "ImpactReport",
    "aggregate",
    "run_campaign",
    "run_campaign_data",
    "scan_gambits",
    "simulate_tournament",
    "SurrogateParams",
    "deterministic_result",
    "distribution",
    "fit_surrogate",
    "fitted_params",
    "PairingInfeasibleError",
    "PairingSystem",
    "pair_round",
    "Ranking",
    "final_ranking",
    "ground_truth",
    "kendall_tau",
    "kendall_tau_difference",
    "welch_one_tailed",
    "export_trf",
    "import_trf",
]
