"""Gambit decision points and the heuristics that judge them.

A decision point marks a game whose outcome the gambit player could have
steered: after winning she could instead have drawn or lost, after a draw
she could have lost, and after a loss there is nothing left to give away.
Each heuristic answers the same question for a point: would some worse
result now have bought a better final rank?

The last two rounds are never scanned; a sacrifice there has no later
pairing to exploit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple, Optional, Sequence

from . import pairing, rng
from .core import Course, GameResult, PairedGame, Round
from .engine import TournamentState, make_resolver, state_from_course
from .outcome import (
    OutcomeDistribution,
    SurrogateParams,
    deterministic_result,
    distribution,
    sample_result,
)
from .stats import welch_one_tailed


class ResultOption(str, Enum):
    WIN = "win"
    DRAW = "draw"
    LOSE = "lose"


_OPTION_ORDER = (ResultOption.WIN, ResultOption.DRAW, ResultOption.LOSE)


def actual_option(result: GameResult, is_white: bool) -> ResultOption:
    if result is GameResult.DRAW:
        return ResultOption.DRAW
    won = (result is GameResult.WHITE_WINS) == is_white
    return ResultOption.WIN if won else ResultOption.LOSE


def gambit_options(actual: ResultOption) -> tuple[ResultOption, ...]:
    """Strictly worse results the player could steer toward, best first."""
    if actual is ResultOption.WIN:
        return (ResultOption.DRAW, ResultOption.LOSE)
    if actual is ResultOption.DRAW:
        return (ResultOption.LOSE,)
    return ()


def result_for(option: ResultOption, is_white: bool) -> GameResult:
    if option is ResultOption.DRAW:
        return GameResult.DRAW
    if (option is ResultOption.WIN) == is_white:
        return GameResult.WHITE_WINS
    return GameResult.BLACK_WINS


@dataclass(frozen=True)
class DecisionPoint:
    """One steerable game: identifiers plus the course prefix through its
    round, with every game of that round resolved as actually played."""

    tournament_id: int
    round_index: int  # 1-based
    board: int  # 1-based within the round
    player_id: int
    actual: ResultOption
    prefix: Course

    def options(self) -> tuple[ResultOption, ...]:
        return gambit_options(self.actual)

    def prefix_with(self, option: ResultOption) -> Course:
        """The prefix with this player's game steered to ``option``."""
        rnd = self.prefix.rounds[-1]
        games = list(rnd.games)
        game = games[self.board - 1]
        is_white = game.white == self.player_id
        games[self.board - 1] = PairedGame(game.white, game.black, result_for(option, is_white))
        rounds = self.prefix.rounds[:-1] + (Round(rnd.index, tuple(games), rnd.bye),)
        return Course(self.prefix.players, rounds, self.prefix.total_rounds)


def find_decision_points(course: Course, tournament_id: int = 0) -> list[DecisionPoint]:
    """All decision points of a complete course, in (round, board) order.

    Decisive games yield one point for the winner; drawn games yield one
    point per player (White's first).  Rounds beyond total_rounds − 2 are
    skipped.
    """
    points = []
    for rnd in course.rounds:
        if rnd.index > course.total_rounds - 2:
            break
        prefix = Course(course.players, course.rounds[: rnd.index], course.total_rounds)
        for board, game in enumerate(rnd.games, start=1):
            if game.result is None:
                raise ValueError(f"round {rnd.index} board {board} has no result")
            for player, is_white in ((game.white, True), (game.black, False)):
                actual = actual_option(game.result, is_white)
                if gambit_options(actual):
                    points.append(
                        DecisionPoint(tournament_id, rnd.index, board, player, actual, prefix)
                    )
    return points


class OptionEvidence(NamedTuple):
    """Per-option statistics backing a verdict; unused fields stay None."""

    rank: Optional[float] = None
    mean: Optional[float] = None
    median: Optional[float] = None
    p_value: Optional[float] = None


@dataclass(frozen=True)
class GambitVerdict:
    beneficial: bool
    chosen: ResultOption
    evidence: dict[ResultOption, OptionEvidence]


@dataclass(frozen=True)
class GambitContext:
    """Everything a heuristic needs besides the point itself."""

    params: SurrogateParams
    system: pairing.PairingSystem = pairing.PairingSystem.DUTCH
    master_seed: int = 0


def _ordered_options(point: DecisionPoint) -> tuple[ResultOption, ...]:
    return (point.actual,) + point.options()


def _rank_after_unique_completion(
    point: DecisionPoint, option: ResultOption, ctx: GambitContext, fractional: bool
) -> int:
    state = state_from_course(point.prefix_with(option))
    total = point.prefix.total_rounds
    if fractional:
        state.complete_fractional(ctx.system, ctx.params, total)
    else:
        resolve = make_resolver(state.elos, "deterministic", ctx.params)
        state.complete(ctx.system, resolve, total, stream=None)
    return state.rank_of(point.player_id)


def _rank_verdict(point: DecisionPoint, ranks: dict[ResultOption, int]) -> GambitVerdict:
    """Pick the option with the best rank; ties keep the actual result,
    then prefer the smaller sacrifice (Draw over Lose)."""
    best = min(ranks.values())
    if ranks[point.actual] <= best:
        chosen, beneficial = point.actual, False
    else:
        chosen = next(o for o in _ordered_options(point) if ranks[o] == best)
        beneficial = True
    evidence = {o: OptionEvidence(rank=float(r)) for o, r in ranks.items()}
    return GambitVerdict(beneficial, chosen, evidence)


def decide_deterministic(point: DecisionPoint, ctx: GambitContext) -> GambitVerdict:
    """Simulate the unique deterministic completion per option and take the
    best final rank.  Under the deterministic model this is exact, not a
    heuristic: the completion is the tournament that would really follow."""
    ranks = {
        o: _rank_after_unique_completion(point, o, ctx, fractional=False)
        for o in _ordered_options(point)
    }
    return _rank_verdict(point, ranks)


def decide_expected_value(point: DecisionPoint, ctx: GambitContext) -> GambitVerdict:
    """One completion per option in which every future game pays out its
    expected points as fractional scores; pairing runs on those scores."""
    ranks = {
        o: _rank_after_unique_completion(point, o, ctx, fractional=True)
        for o in _ordered_options(point)
    }
    return _rank_verdict(point, ranks)


# ---------------------------------------------------------------------------
# sampling heuristics


def sample_final_ranks(
    point: DecisionPoint, option: ResultOption, ctx: GambitContext, sample_size: int
) -> list[int]:
    """Final ranks of the gambit player over ``sample_size`` completions of
    the option's prefix.  Sample k draws from a stream keyed by (tournament,
    round, board, player, option, k), so heuristics sharing samples agree
    and workers produce identical numbers in any order."""
    base = state_from_course(point.prefix_with(option))
    total = point.prefix.total_rounds
    resolve = make_resolver(base.elos, "probabilistic", ctx.params)
    last = base.rounds_played + 1 == total
    first_pairs, first_bye = pairing.pair_state(base, ctx.system, last_round=last)
    ranks = []
    for k in range(sample_size):
        stream = rng.stream(
            ctx.master_seed,
            "cmpl",
            point.tournament_id,
            point.round_index,
            point.board,
            point.player_id,
            option.value,
            k,
        )
        state = base.clone()
        state.play_paired(first_pairs, first_bye, resolve, stream)
        state.complete(ctx.system, resolve, total, stream)
        ranks.append(state.rank_of(point.player_id))
    return ranks


def _median(values: Sequence[float]) -> float:
    ordered = sorted(values)
    n = len(ordered)
    mid = n // 2
    if n % 2 == 1:
        return float(ordered[mid])
    return (ordered[mid - 1] + ordered[mid]) / 2.0


def evaluate_samples(
    point: DecisionPoint, samples: dict[ResultOption, Sequence[float]]
) -> dict[ResultOption, OptionEvidence]:
    """Shared evidence for the sampling heuristics: mean and median per
    option, and for each gambit option Welch's one-tailed p against the
    actual sample (small p = gambit ranks are convincingly better)."""
    actual = samples[point.actual]
    evidence = {}
    for option in _ordered_options(point):
        ranks = samples[option]
        mean = sum(ranks) / len(ranks)
        if option is point.actual:
            evidence[option] = OptionEvidence(mean=mean, median=_median(ranks))
        else:
            p = welch_one_tailed(ranks, actual).p_one_tailed
            evidence[option] = OptionEvidence(mean=mean, median=_median(ranks), p_value=p)
    return evidence


def collect_samples(
    point: DecisionPoint, ctx: GambitContext, sample_size: int
) -> dict[ResultOption, list[int]]:
    return {
        option: sample_final_ranks(point, option, ctx, sample_size)
        for option in _ordered_options(point)
    }


def decide_pvalue(
    point: DecisionPoint,
    ctx: GambitContext,
    sample_size: int = 200,
    alpha: float = 0.05,
    samples: Optional[dict[ResultOption, Sequence[float]]] = None,
) -> GambitVerdict:
    """Gambit only when the sampled improvement is statistically convincing:
    beneficial iff some gambit option's one-tailed p drops below alpha."""
    if samples is None:
        samples = collect_samples(point, ctx, sample_size)
    evidence = evaluate_samples(point, samples)
    candidates = [
        (evidence[o].p_value, evidence[o].mean, i, o)
        for i, o in enumerate(point.options())
    ]
    if not candidates:
        return GambitVerdict(False, point.actual, evidence)
    p, _, _, option = min(candidates)
    if p < alpha:
        return GambitVerdict(True, option, evidence)
    return GambitVerdict(False, point.actual, evidence)


def _threshold_verdict(point, evidence, field) -> GambitVerdict:
    actual_value = getattr(evidence[point.actual], field)
    candidates = [
        (getattr(evidence[o], field), i, o) for i, o in enumerate(point.options())
    ]
    if not candidates:
        return GambitVerdict(False, point.actual, evidence)
    value, _, option = min(candidates)
    if value < actual_value:
        return GambitVerdict(True, option, evidence)
    return GambitVerdict(False, point.actual, evidence)


def decide_mean(
    point: DecisionPoint,
    ctx: GambitContext,
    sample_size: int = 200,
    samples: Optional[dict[ResultOption, Sequence[float]]] = None,
) -> GambitVerdict:
    """Beneficial iff a gambit option's sample mean rank is strictly better
    than the actual option's."""
    if samples is None:
        samples = collect_samples(point, ctx, sample_size)
    return _threshold_verdict(point, evaluate_samples(point, samples), "mean")


def decide_median(
    point: DecisionPoint,
    ctx: GambitContext,
    sample_size: int = 200,
    samples: Optional[dict[ResultOption, Sequence[float]]] = None,
) -> GambitVerdict:
    """Beneficial iff a gambit option's sample median rank is strictly better
    than the actual option's."""
    if samples is None:
        samples = collect_samples(point, ctx, sample_size)
    return _threshold_verdict(point, evaluate_samples(point, samples), "median")


# ---------------------------------------------------------------------------
# expected final rank

DistributionFor = Callable[[int, int], OutcomeDistribution]


class _LeafBudget:
    __slots__ = ("left",)

    def __init__(self, limit: int):
        self.left = limit


class CompletionTreeTooLarge(Exception):
    pass


def _enumerate_rank(
    state: TournamentState,
    player: int,
    total: int,
    system: pairing.PairingSystem,
    dist_for: DistributionFor,
    budget: _LeafBudget,
) -> float:
    """Probability-weighted final rank over every completion of ``state``."""
    if state.rounds_played == total:
        budget.left -= 1
        if budget.left < 0:
            raise CompletionTreeTooLarge
        return float(state.rank_of(player))
    last = state.rounds_played + 1 == total
    pairs, bye = pairing.pair_state(state, system, last_round=last)
    per_game = []
    for white, black in pairs:
        dist = dist_for(white, black)
        branches = [
            (result, p)
            for result, p in (
                (GameResult.WHITE_WINS, dist.p_white_win),
                (GameResult.DRAW, dist.p_draw),
                (GameResult.BLACK_WINS, dist.p_black_win),
            )
            if p > 0.0
        ]
        per_game.append(branches)
    value = 0.0
    for combo in itertools.product(*per_game):
        branch = state.clone()
        prob = 1.0
        for (white, black), (result, p) in zip(pairs, combo):
            branch.apply_game(white, black, result)
            prob *= p
        if bye is not None:
            branch.apply_bye(bye)
        branch.rounds_played += 1
        value += prob * _enumerate_rank(branch, player, total, system, dist_for, budget)
    return value


def expected_final_rank(
    prefix: Course,
    player_id: int,
    ctx: GambitContext,
    model: str = "probabilistic",
    mode: str = "auto",
    leaf_limit: int = 10_000,
    sample_size: int = 200,
    dist_for: Optional[DistributionFor] = None,
) -> float:
    """Expected final rank of a player over all completions of a prefix.

    ``mode`` "exact" enumerates the completion tree and fails once it
    exceeds ``leaf_limit`` leaves; "sampled" averages sampled completions;
    "auto" tries exact first and falls back to sampling.  Under the
    deterministic model every game has one outcome, so the tree has a
    single leaf and the value is that completion's rank.
    """
    base = state_from_course(prefix)
    total = prefix.total_rounds
    if base.rounds_played == total:
        return float(base.rank_of(player_id))
    if dist_for is None:
        elos = base.elos
        cache: dict[tuple[int, int], OutcomeDistribution] = {}

        if model == "deterministic":

            def dist_for(white: int, black: int) -> OutcomeDistribution:
                dist = cache.get((white, black))
                if dist is None:
                    result = deterministic_result(elos[white], elos[black], ctx.params)
                    dist = OutcomeDistribution(
                        p_white_win=1.0 if result is GameResult.WHITE_WINS else 0.0,
                        p_black_win=1.0 if result is GameResult.BLACK_WINS else 0.0,
                        p_draw=1.0 if result is GameResult.DRAW else 0.0,
                    )
                    cache[(white, black)] = dist
                return dist

        else:

            def dist_for(white: int, black: int) -> OutcomeDistribution:
                dist = cache.get((white, black))
                if dist is None:
                    dist = distribution(elos[white], elos[black], ctx.params)
                    cache[(white, black)] = dist
                return dist

    if mode in ("exact", "auto"):
        try:
            return _enumerate_rank(
                base.clone(), player_id, total, ctx.system, dist_for, _LeafBudget(leaf_limit)
            )
        except CompletionTreeTooLarge:
            if mode == "exact":
                raise

    def resolve(white: int, black: int, stream) -> GameResult:
        return sample_result(dist_for(white, black), stream)

    totals = 0.0
    for k in range(sample_size):
        stream = rng.stream(ctx.master_seed, "efr", player_id, base.rounds_played, k)
        state = base.clone()
        state.complete(ctx.system, resolve, total, stream)
        totals += state.rank_of(player_id)
    return totals / sample_size
