"""Campaign orchestration: seeded tournaments, gambit scans, output files.

A campaign runs many independent tournaments, scans each complete course
for gambit decision points, judges every point with the configured
heuristic, and aggregates four impact measures: the number of gambit
possibilities, the mean and total rank difference, and the Kendall-tau
ranking-quality difference.

Every random draw comes from a stream derived by hashing the master seed
with a structured key, so results are identical no matter how many
workers carry the load or in which order they finish.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from multiprocessing import Pool
from pathlib import Path
from typing import Optional, Sequence

from . import gambit, outcome, rng
from .core import Course, PairedGame, Player, Round
from .engine import TournamentState, make_resolver, state_from_course
from .gambit import DecisionPoint, GambitContext, GambitVerdict, ResultOption
from .pairing import PairingSystem
from .ranking import Ranking, ground_truth, kendall_tau

MODELS = ("deterministic", "probabilistic")
HEURISTICS = ("optimal-det", "p-value", "mean", "median", "expected-value")

# heuristics that consume sampled completions (and can share one sample set)
_SAMPLING = frozenset(("p-value", "mean", "median"))
_DETERMINISTIC_ONLY = frozenset(("optimal-det",))


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class ExperimentConfig:
    players: int = 32
    rounds: int = 5
    tournaments: int = 1000
    sample_size: int = 200
    strength_range: tuple[int, int] = (1000, 2600)
    model: str = "deterministic"
    heuristic: str = "optimal-det"
    pairing_system: str = "dutch"
    master_seed: int = 0
    workers: int = 1
    alpha: float = 0.05

    def problems(self, for_scan: bool = True) -> list[str]:
        """Violated invariants, one message each; empty means valid.

        ``for_scan`` adds the constraints of a full gambit campaign; plain
        tournament simulation only needs the weaker checks.
        """
        out = []
        lo, hi = self.strength_range
        if self.players < 2:
            out.append("players must be at least 2")
        if self.rounds < 1:
            out.append("rounds must be at least 1")
        if for_scan and self.rounds < 3:
            out.append("rounds must be at least 3 to scan for gambits")
        if self.tournaments < 1:
            out.append("tournaments must be at least 1")
        if self.sample_size < 2:
            out.append("sample_size must be at least 2")
        if lo >= hi:
            out.append(f"strength range must satisfy lo < hi, got ({lo}, {hi})")
        elif hi - lo + 1 < self.players:
            out.append(f"strength range ({lo}, {hi}) too narrow for {self.players} distinct ratings")
        if self.model not in MODELS:
            out.append(f"unknown model {self.model!r}")
        if self.heuristic not in HEURISTICS:
            out.append(f"unknown heuristic {self.heuristic!r}")
        elif self.model in MODELS:
            mismatch = _heuristic_model_mismatch(self.heuristic, self.model)
            if mismatch:
                out.append(mismatch)
        try:
            PairingSystem(self.pairing_system)
        except ValueError:
            out.append(f"unknown pairing system {self.pairing_system!r}")
        if self.workers < 1:
            out.append("workers must be at least 1")
        if not 0.0 <= self.alpha <= 1.0:
            out.append("alpha must lie in [0, 1]")
        return out

    def validate(self, for_scan: bool = True) -> None:
        problems = self.problems(for_scan)
        if problems:
            raise ValueError("; ".join(problems))

    @property
    def system(self) -> PairingSystem:
        return PairingSystem(self.pairing_system)

    def tournament_seed(self, index: int) -> int:
        return rng.derive_seed(self.master_seed, "tournament", index)


def _heuristic_model_mismatch(heuristic: str, model: str) -> Optional[str]:
    if heuristic in _DETERMINISTIC_ONLY and model != "deterministic":
        return f"heuristic {heuristic!r} requires the deterministic model"
    if heuristic not in _DETERMINISTIC_ONLY and model != "probabilistic":
        return f"heuristic {heuristic!r} requires the probabilistic model"
    return None


# ---------------------------------------------------------------------------
# records and reports


@dataclass(frozen=True)
class GambitRecord:
    """One heuristic verdict on one decision point, with its realized impact.

    ``rank_diff = rank_with - rank_without``; negative means the gambit
    improved the player's final rank.  Non-beneficial verdicts carry
    ``rank_with = rank_without`` so their differences are zero.
    """

    tournament_id: int
    round: int
    board: int
    player_id: int
    player_elo: int
    actual_result: str
    chosen_option: str
    beneficial: bool
    p_value: Optional[float]
    mean_rank_actual: Optional[float]
    mean_rank_gambit: Optional[float]
    rank_without: int
    rank_with: int
    rank_diff: int
    tau_without: float
    tau_with: float
    tau_diff: float


GAMBIT_COLUMNS = (
    "tournament_id",
    "round",
    "board",
    "player_id",
    "player_elo",
    "actual_result",
    "chosen_option",
    "beneficial",
    "p_value",
    "mean_rank_actual",
    "mean_rank_gambit",
    "rank_without",
    "rank_with",
    "rank_diff",
    "tau_without",
    "tau_with",
    "tau_diff",
)

TOURNAMENT_COLUMNS = (
    "tournament_id",
    "seed",
    "n_gambit_possibilities",
    "total_rank_diff",
    "mean_rank_diff",
    "tau_no_gambit",
    "mean_tau_with_gambit",
    "draw_fraction",
)


@dataclass(frozen=True)
class ImpactReport:
    """Aggregate impact over the beneficial records of a record set."""

    count: int
    total_rank_diff: int
    mean_rank_diff: Optional[float]
    mean_tau_diff: Optional[float]
    ranking_quality_with: Optional[float]
    ranking_quality_without: float


@dataclass(frozen=True)
class TournamentRun:
    """Everything one tournament contributes to a campaign.

    ``records`` is keyed by heuristic name; a plain campaign has a single
    key, while property studies may judge several heuristics against the
    same sampled completions.
    """

    tournament_id: int
    seed: int
    draw_fraction: float
    tau_no_gambit: float
    n_games_scanned: int
    n_completions: int
    records: dict[str, list[GambitRecord]] = field(default_factory=dict)


@dataclass(frozen=True)
class CampaignData:
    config: ExperimentConfig
    heuristics: tuple[str, ...]
    runs: list[TournamentRun]
    reports: dict[str, ImpactReport]
    elapsed_seconds: float

    def records(self, heuristic: Optional[str] = None) -> list[GambitRecord]:
        name = heuristic or self.config.heuristic
        return [record for run in self.runs for record in run.records[name]]


# ---------------------------------------------------------------------------
# single tournament


def simulate_tournament(config: ExperimentConfig, tournament_seed: int) -> tuple[Course, Ranking]:
    """Play one full tournament; returns its course and final ranking.

    Ratings are distinct values drawn uniformly from the strength range
    and assigned in descending order, so player id equals ground-truth
    rank minus one.  Bit-reproducible from (config, tournament_seed).
    """
    config.validate(for_scan=False)
    lo, hi = config.strength_range
    elo_stream = rng.stream(tournament_seed, "elo")
    elos = sorted(elo_stream.sample(range(lo, hi + 1), config.players), reverse=True)
    state = TournamentState(elos)
    resolve = make_resolver(elos, config.model, outcome.fitted_params())
    players = tuple(Player(i, e) for i, e in enumerate(elos))
    course = Course(players=players, rounds=(), total_rounds=config.rounds)
    for rd in range(config.rounds):
        games, bye = state.play_round(
            config.system, resolve, rng.stream(tournament_seed, "game", rd), config.rounds
        )
        paired = tuple(PairedGame(white, black, result) for white, black, result in games)
        course = course.with_round(Round(rd + 1, paired, bye))
    return course, Ranking(tuple(state.final_order()))


def scan_gambits(
    course: Course, config: ExperimentConfig, tournament_id: int = 0
) -> list[GambitRecord]:
    """Judge every decision point of a complete course with the configured
    heuristic and emit one record per point, in (round, board, color) order."""
    records, _games, _completions = _scan(course, config, (config.heuristic,), tournament_id)
    return records[config.heuristic]


def _scan(
    course: Course,
    config: ExperimentConfig,
    heuristics: Sequence[str],
    tournament_id: int,
) -> tuple[dict[str, list[GambitRecord]], int, int]:
    """Shared scan machinery; sampling heuristics reuse one sample set per
    point.  Returns per-heuristic records plus the scanned-game and
    prefix-simulation counts."""
    ctx = GambitContext(
        params=outcome.fitted_params(),
        system=config.system,
        master_seed=config.master_seed,
    )
    truth = ground_truth(course.players)
    actual_state = state_from_course(course)
    actual_order = actual_state.final_order()
    tau_without = float(kendall_tau(Ranking(tuple(actual_order)), truth))
    rank_without_of = {p: i + 1 for i, p in enumerate(actual_order)}

    need_samples = any(h in _SAMPLING for h in heuristics)
    points = gambit.find_decision_points(course, tournament_id)
    n_games = sum(len(rnd.games) for rnd in course.rounds if rnd.index <= course.total_rounds - 2)
    n_completions = 0
    records: dict[str, list[GambitRecord]] = {h: [] for h in heuristics}

    for point in points:
        n_options = 1 + len(point.options())
        samples = None
        if need_samples:
            samples = gambit.collect_samples(point, ctx, config.sample_size)
            n_completions += n_options * config.sample_size
        for heuristic in heuristics:
            if heuristic in ("optimal-det", "expected-value"):
                n_completions += n_options
            verdict = _judge(point, ctx, config, heuristic, samples)
            records[heuristic].append(
                _record(point, verdict, ctx, config, heuristic, truth, tau_without, rank_without_of)
            )
    return records, n_games, n_completions


def _judge(
    point: DecisionPoint,
    ctx: GambitContext,
    config: ExperimentConfig,
    heuristic: str,
    samples,
) -> GambitVerdict:
    if heuristic == "optimal-det":
        return gambit.decide_deterministic(point, ctx)
    if heuristic == "expected-value":
        return gambit.decide_expected_value(point, ctx)
    if heuristic == "p-value":
        return gambit.decide_pvalue(point, ctx, config.sample_size, config.alpha, samples=samples)
    if heuristic == "mean":
        return gambit.decide_mean(point, ctx, config.sample_size, samples=samples)
    if heuristic == "median":
        return gambit.decide_median(point, ctx, config.sample_size, samples=samples)
    raise ValueError(f"unknown heuristic {heuristic!r}")


def _record(
    point: DecisionPoint,
    verdict: GambitVerdict,
    ctx: GambitContext,
    config: ExperimentConfig,
    heuristic: str,
    truth: Ranking,
    tau_without: float,
    rank_without_of: dict[int, int],
) -> GambitRecord:
    sampling = heuristic in _SAMPLING
    evidence = verdict.evidence

    def stat(option: ResultOption) -> Optional[float]:
        ev = evidence[option]
        return ev.mean if sampling else ev.rank

    gambit_option = verdict.chosen if verdict.beneficial else min(
        point.options(), key=lambda o: (stat(o), _option_index(o))
    )
    p_value = None
    if sampling:
        p_value = min(evidence[o].p_value for o in point.options())

    rank_without = rank_without_of[point.player_id]
    if verdict.beneficial:
        rank_with, tau_with = _realize(point, verdict.chosen, ctx, config, heuristic, truth)
    else:
        rank_with, tau_with = rank_without, tau_without

    return GambitRecord(
        tournament_id=point.tournament_id,
        round=point.round_index,
        board=point.board,
        player_id=point.player_id,
        player_elo=point.prefix.player_by_id(point.player_id).elo,
        actual_result=point.actual.value,
        chosen_option=verdict.chosen.value,
        beneficial=verdict.beneficial,
        p_value=p_value,
        mean_rank_actual=stat(point.actual),
        mean_rank_gambit=stat(gambit_option),
        rank_without=rank_without,
        rank_with=rank_with,
        rank_diff=rank_with - rank_without,
        tau_without=tau_without,
        tau_with=tau_with,
        tau_diff=tau_with - tau_without,
    )


def _option_index(option: ResultOption) -> int:
    return ("win", "draw", "lose").index(option.value)


def _realize(
    point: DecisionPoint,
    option: ResultOption,
    ctx: GambitContext,
    config: ExperimentConfig,
    heuristic: str,
    truth: Ranking,
) -> tuple[int, float]:
    """Final rank and ranking quality of the course the gambit would have
    produced: the unique completion under the deterministic model, one
    freshly seeded completion under the probabilistic one."""
    state = state_from_course(point.prefix_with(option))
    resolve = make_resolver(state.elos, config.model, ctx.params)
    if config.model == "deterministic":
        stream = None
    else:
        stream = rng.stream(
            ctx.master_seed,
            "realize",
            heuristic,
            point.tournament_id,
            point.round_index,
            point.board,
            point.player_id,
            option.value,
        )
    state.complete(ctx.system, resolve, point.prefix.total_rounds, stream)
    order = state.final_order()
    tau_with = float(kendall_tau(Ranking(tuple(order)), truth))
    return order.index(point.player_id) + 1, tau_with


# ---------------------------------------------------------------------------
# aggregation


def aggregate(records: Sequence[GambitRecord], baseline_tau: float) -> ImpactReport:
    """Impact of the beneficial records: possibility count, rank
    differences, and ranking quality with gambits against the supplied
    no-gambit baseline.  Means are omitted (None) when nothing was
    beneficial; the total is then zero."""
    beneficial = [r for r in records if r.beneficial]
    count = len(beneficial)
    total = sum(r.rank_diff for r in beneficial)
    if count == 0:
        return ImpactReport(0, 0, None, None, None, baseline_tau)
    return ImpactReport(
        count=count,
        total_rank_diff=total,
        mean_rank_diff=total / count,
        mean_tau_diff=sum(r.tau_diff for r in beneficial) / count,
        ranking_quality_with=sum(r.tau_with for r in beneficial) / count,
        ranking_quality_without=baseline_tau,
    )


# ---------------------------------------------------------------------------
# campaigns


def _run_one(config: ExperimentConfig, heuristics: tuple[str, ...], index: int) -> TournamentRun:
    seed = config.tournament_seed(index)
    course, _ranking = simulate_tournament(config, seed)
    records, n_games, n_completions = _scan(course, config, heuristics, index)
    n_draws = sum(
        1 for rnd in course.rounds for game in rnd.games if game.result.white_points2 == 1
    )
    n_played = sum(len(rnd.games) for rnd in course.rounds)
    tau = records[heuristics[0]][0].tau_without if records[heuristics[0]] else _course_tau(course)
    return TournamentRun(
        tournament_id=index,
        seed=seed,
        draw_fraction=n_draws / n_played if n_played else 0.0,
        tau_no_gambit=tau,
        n_games_scanned=n_games,
        n_completions=n_completions,
        records=records,
    )


def _course_tau(course: Course) -> float:
    order = state_from_course(course).final_order()
    return float(kendall_tau(Ranking(tuple(order)), ground_truth(course.players)))


def _campaign_worker(args) -> TournamentRun:
    config, heuristics, index = args
    return _run_one(config, heuristics, index)


def run_campaign_data(
    config: ExperimentConfig, heuristics: Optional[Sequence[str]] = None
) -> CampaignData:
    """Run all tournaments of a campaign and aggregate, without touching
    the filesystem.  ``heuristics`` defaults to the configured one; extra
    sampling heuristics ride along on the same completion samples."""
    config.validate(for_scan=True)
    chosen = tuple(heuristics) if heuristics else (config.heuristic,)
    for heuristic in chosen:
        if heuristic not in HEURISTICS:
            raise ValueError(f"unknown heuristic {heuristic!r}")
        mismatch = _heuristic_model_mismatch(heuristic, config.model)
        if mismatch:
            raise ValueError(mismatch)

    started = time.perf_counter()
    jobs = [(config, chosen, index) for index in range(config.tournaments)]
    if config.workers > 1:
        with Pool(config.workers) as pool:
            runs = pool.map(_campaign_worker, jobs)
    else:
        runs = [_campaign_worker(job) for job in jobs]

    baseline = sum(run.tau_no_gambit for run in runs) / len(runs)
    reports = {
        heuristic: aggregate(
            [record for run in runs for record in run.records[heuristic]], baseline
        )
        for heuristic in chosen
    }
    return CampaignData(config, chosen, runs, reports, time.perf_counter() - started)


def run_campaign(config: ExperimentConfig, out_dir: str | Path) -> CampaignData:
    """Run a campaign and write gambits.csv, tournaments.csv and
    summary.json for the configured heuristic into ``out_dir``."""
    data = run_campaign_data(config)
    write_outputs(data, out_dir)
    return data


# ---------------------------------------------------------------------------
# output files


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, Fraction):
        return str(float(value))
    return str(value)


def _write_csv(path: Path, columns: Sequence[str], rows) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(value) for value in row])


def tournament_row(run: TournamentRun, heuristic: str) -> tuple:
    beneficial = [r for r in run.records[heuristic] if r.beneficial]
    count = len(beneficial)
    total = sum(r.rank_diff for r in beneficial)
    return (
        run.tournament_id,
        run.seed,
        count,
        total,
        total / count if count else None,
        run.tau_no_gambit,
        sum(r.tau_with for r in beneficial) / count if count else None,
        run.draw_fraction,
    )


def write_outputs(data: CampaignData, out_dir: str | Path, heuristic: Optional[str] = None) -> Path:
    """Write the three campaign files; returns the output directory."""
    name = heuristic or data.config.heuristic
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    records = data.records(name)
    _write_csv(
        out / "gambits.csv",
        GAMBIT_COLUMNS,
        ([getattr(r, column) for column in GAMBIT_COLUMNS] for r in records),
    )
    _write_csv(
        out / "tournaments.csv",
        TOURNAMENT_COLUMNS,
        (tournament_row(run, name) for run in data.runs),
    )
    with open(out / "summary.json", "w") as handle:
        json.dump(summary_dict(data, name), handle, indent=2)
        handle.write("\n")
    return out


def summary_dict(data: CampaignData, heuristic: Optional[str] = None) -> dict:
    name = heuristic or data.config.heuristic
    report = data.reports[name]
    runs = data.runs
    echo = asdict(data.config)
    echo["strength_range"] = list(data.config.strength_range)
    return {
        "config": echo,
        "heuristic": name,
        "aggregates": {
            "tournaments": len(runs),
            "gambit_possibilities": report.count,
            "mean_possibilities_per_tournament": report.count / len(runs),
            "total_rank_diff": report.total_rank_diff,
            "mean_rank_diff": report.mean_rank_diff,
            "mean_tau_diff": report.mean_tau_diff,
            "ranking_quality_with": report.ranking_quality_with,
            "ranking_quality_without": report.ranking_quality_without,
            "mean_draw_fraction": sum(r.draw_fraction for r in runs) / len(runs),
            "games_scanned": sum(r.n_games_scanned for r in runs),
            "prefix_simulations": sum(r.n_completions for r in runs),
        },
        "calibration": {
            "max_table_residual": outcome.max_table_residual(outcome.fitted_params())
        },
        "timings": {
            "wall_seconds": data.elapsed_seconds,
            "seconds_per_tournament": data.elapsed_seconds / len(runs),
        },
    }
