"""Domain types and bookkeeping for Swiss tournaments.

Types here are immutable values; all mutation happens in the simulation
engine, which works on its own lightweight state and materializes these
types at the boundaries.  Scores are exact rationals throughout so that
score groups stay well defined even when games award fractional points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional


class Color(str, Enum):
    WHITE = "W"
    BLACK = "B"


class GameResult(str, Enum):
    WHITE_WINS = "1-0"
    BLACK_WINS = "0-1"
    DRAW = "1/2-1/2"

    @property
    def white_points2(self) -> int:
        """Points earned by White, in half-point units (2 = one point)."""
        if self is GameResult.WHITE_WINS:
            return 2
        if self is GameResult.DRAW:
            return 1
        return 0

    @property
    def black_points2(self) -> int:
        return 2 - self.white_points2

    def points(self) -> tuple[Fraction, Fraction]:
        """(white, black) points as exact fractions; they sum to 1."""
        return Fraction(self.white_points2, 2), Fraction(self.black_points2, 2)


@dataclass(frozen=True)
class Player:
    id: int
    elo: int


@dataclass(frozen=True)
class PairedGame:
    white: int
    black: int
    result: Optional[GameResult] = None


@dataclass(frozen=True)
class Round:
    """One round: a list of games plus an optional bye recipient."""

    index: int
    games: tuple[PairedGame, ...]
    bye: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "games", tuple(self.games))


@dataclass(frozen=True)
class Course:
    """Pairings and results of the rounds played so far.

    A course is *complete* when all ``total_rounds`` rounds are present and
    every game has a result; otherwise it is a prefix of a tournament.
    """

    players: tuple[Player, ...]
    rounds: tuple[Round, ...]
    total_rounds: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "players", tuple(self.players))
        object.__setattr__(self, "rounds", tuple(self.rounds))

    @property
    def is_complete(self) -> bool:
        return len(self.rounds) == self.total_rounds and all(
            game.result is not None for rnd in self.rounds for game in rnd.games
        )

    def player_by_id(self, player_id: int) -> Player:
        return self.players[player_id]

    def with_round(self, rnd: Round) -> "Course":
        return Course(self.players, self.rounds + (rnd,), self.total_rounds)


ScoreTable = dict[int, Fraction]

BYE_POINTS2 = 2  # a pairing-allocated bye scores a full point


def scores_after(course: Course, round_index: int) -> ScoreTable:
    """Cumulative score of every player after ``round_index`` rounds.

    Exact rational arithmetic; byes count one point.  Raises ValueError for
    an out-of-range index or a missing result within the requested range.
    """
    if round_index < 0 or round_index > len(course.rounds):
        raise ValueError(f"round_index {round_index} out of range")
    table: ScoreTable = {p.id: Fraction(0) for p in course.players}
    for rnd in course.rounds[:round_index]:
        for game in rnd.games:
            if game.result is None:
                raise ValueError(f"round {rnd.index}: unresolved game {game.white}-{game.black}")
            white_pts, black_pts = game.result.points()
            table[game.white] += white_pts
            table[game.black] += black_pts
        if rnd.bye is not None:
            table[rnd.bye] += Fraction(BYE_POINTS2, 2)
    return table


def validate_course(course: Course) -> list[str]:
    """Check structural invariants; returns one message per violation.

    An empty list means the course is legal: ids dense, pairs disjoint,
    no rematches, color difference within bounds (one extra unit allowed
    in the final round), and no three same-colored games in a row.
    """
    problems: list[str] = []
    n = len(course.players)
    ids = [p.id for p in course.players]
    if sorted(ids) != list(range(n)):
        problems.append("player ids are not dense 0..n-1")
        return problems
    if len({p.elo for p in course.players}) != n:
        problems.append("duplicate elo values")

    met: set[frozenset[int]] = set()
    color_seq: dict[int, list[tuple[int, str]]] = {i: [] for i in ids}
    for rnd in course.rounds:
        seen: set[int] = set()
        for game in rnd.games:
            if game.white == game.black:
                problems.append(f"round {rnd.index}: player {game.white} paired with self")
                continue
            for pid in (game.white, game.black):
                if pid in seen:
                    problems.append(f"round {rnd.index}: player {pid} appears twice")
                seen.add(pid)
            key = frozenset((game.white, game.black))
            if key in met:
                problems.append(
                    f"round {rnd.index}: rematch {game.white}-{game.black}"
                )
            met.add(key)
            color_seq[game.white].append((rnd.index, "W"))
            color_seq[game.black].append((rnd.index, "B"))
        if rnd.bye is not None:
            if rnd.bye in seen:
                problems.append(f"round {rnd.index}: bye player {rnd.bye} also paired")
            if n % 2 == 0:
                problems.append(f"round {rnd.index}: bye with even player count")

    for pid in ids:
        seq = color_seq[pid]
        diff = 0
        for k, (round_index, color) in enumerate(seq):
            diff += 1 if color == "W" else -1
            limit = 3 if round_index == course.total_rounds else 2
            if abs(diff) > limit:
                problems.append(
                    f"round {round_index}: player {pid} color difference {diff}"
                )
            if k >= 2 and color == seq[k - 1][1] == seq[k - 2][1]:
                problems.append(
                    f"round {round_index}: player {pid} has three {color} games in a row"
                )
    return problems
