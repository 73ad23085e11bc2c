"""Mutable tournament state for fast simulation.

The immutable Course type is the boundary representation; this engine
keeps the same information in flat per-player arrays so that completing
a tournament thousands of times (for gambit sampling) stays cheap.
Scores are stored doubled (2 = one point) so ordinary play uses plain
integers; expected-value play drops exact Fractions into the same slots
and every comparison keeps working.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Optional

from . import outcome, pairing
from .core import Course, GameResult

Resolver = Callable[[int, int, random.Random], GameResult]

_BYE_OPP = -1


class TournamentState:
    __slots__ = ("elos", "scores2", "opponents", "colors", "log", "had_bye", "rounds_played")

    def __init__(self, elos: list[int]):
        n = len(elos)
        self.elos = elos
        self.scores2 = [0] * n
        self.opponents: list[set[int]] = [set() for _ in range(n)]
        self.colors = [""] * n
        # per player: (opponent id or -1 for a bye, points earned doubled)
        self.log: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        self.had_bye: set[int] = set()
        self.rounds_played = 0

    def clone(self) -> "TournamentState":
        other = TournamentState.__new__(TournamentState)
        other.elos = self.elos  # shared, never mutated
        other.scores2 = list(self.scores2)
        other.opponents = [set(s) for s in self.opponents]
        other.colors = list(self.colors)
        other.log = [list(entries) for entries in self.log]
        other.had_bye = set(self.had_bye)
        other.rounds_played = self.rounds_played
        return other

    def apply_game(self, white: int, black: int, result: GameResult) -> None:
        wp = result.white_points2
        self.scores2[white] += wp
        self.scores2[black] += 2 - wp
        self.opponents[white].add(black)
        self.opponents[black].add(white)
        self.colors[white] += "W"
        self.colors[black] += "B"
        self.log[white].append((black, wp))
        self.log[black].append((white, 2 - wp))

    def apply_fractional_game(self, white: int, black: int, white_expectation: float) -> None:
        """Score a game by expected value instead of an outcome."""
        wp = Fraction(2.0 * white_expectation)
        self.scores2[white] += wp
        self.scores2[black] += 2 - wp
        self.opponents[white].add(black)
        self.opponents[black].add(white)
        self.colors[white] += "W"
        self.colors[black] += "B"
        self.log[white].append((black, wp))
        self.log[black].append((white, 2 - wp))

    def apply_bye(self, player: int) -> None:
        self.scores2[player] += 2
        self.log[player].append((_BYE_OPP, 2))
        self.had_bye.add(player)

    # -- playing ----------------------------------------------------------

    def play_round(
        self,
        system: pairing.PairingSystem,
        resolve: Resolver,
        stream: random.Random,
        total_rounds: int,
    ):
        """Pair and resolve one round; returns (games, bye) for recording."""
        last = self.rounds_played + 1 == total_rounds
        pairs, bye = pairing.pair_state(self, system, last_round=last)
        games = []
        for white, black in pairs:
            result = resolve(white, black, stream)
            self.apply_game(white, black, result)
            games.append((white, black, result))
        if bye is not None:
            self.apply_bye(bye)
        self.rounds_played += 1
        return games, bye

    def play_paired(self, pairs, bye: Optional[int], resolve: Resolver, stream: random.Random) -> None:
        """Resolve one round whose pairing was computed in advance.

        Pairing is a pure function of the state, so callers completing many
        samples from one prefix can pair the first remaining round once and
        replay it against every sample.
        """
        for white, black in pairs:
            self.apply_game(white, black, resolve(white, black, stream))
        if bye is not None:
            self.apply_bye(bye)
        self.rounds_played += 1

    def complete(
        self,
        system: pairing.PairingSystem,
        resolve: Resolver,
        total_rounds: int,
        stream: random.Random,
    ) -> None:
        while self.rounds_played < total_rounds:
            self.play_round(system, resolve, stream, total_rounds)

    def complete_fractional(
        self,
        system: pairing.PairingSystem,
        params: outcome.SurrogateParams,
        total_rounds: int,
    ) -> None:
        """Finish the tournament awarding every future game its expected
        points; pairing then operates on the fractional score table."""
        while self.rounds_played < total_rounds:
            last = self.rounds_played + 1 == total_rounds
            pairs, bye = pairing.pair_state(self, system, last_round=last)
            for white, black in pairs:
                e = outcome.expected_score(self.elos[white], self.elos[black], params)
                self.apply_fractional_game(white, black, e)
            if bye is not None:
                self.apply_bye(bye)
            self.rounds_played += 1

    # -- ranking ----------------------------------------------------------

    def tiebreak_stats(self, player: int):
        """(score2, buchholz-cut-1, buchholz, sonneborn-berger) in doubled
        respectively quadrupled units; byes count as an opponent with the
        player's own score."""
        s2 = self.scores2
        bh = 0
        sb4 = 0
        worst = None
        for opp, pts2 in self.log[player]:
            opp_score = s2[player] if opp < 0 else s2[opp]
            bh += opp_score
            sb4 += pts2 * opp_score
            if worst is None or opp_score < worst:
                worst = opp_score
        bh1 = bh - worst if worst is not None else bh
        return s2[player], bh1, bh, sb4

    def final_order(self) -> list[int]:
        """Player ids from first to last place by the tiebreak chain
        (score, Buchholz Cut-1, Buchholz, Sonneborn-Berger, Elo, id)."""
        keys = {}
        for p in range(len(self.elos)):
            s2, bh1, bh, sb4 = self.tiebreak_stats(p)
            keys[p] = (-s2, -bh1, -bh, -sb4, -self.elos[p], p)
        return sorted(keys, key=keys.__getitem__)

    def rank_of(self, player: int) -> int:
        return self.final_order().index(player) + 1


def state_from_course(course: Course) -> TournamentState:
    elos = [0] * len(course.players)
    for p in course.players:
        elos[p.id] = p.elo
    state = TournamentState(elos)
    for rnd in course.rounds:
        for game in rnd.games:
            if game.result is None:
                raise ValueError(f"round {rnd.index} has unresolved games")
            state.apply_game(game.white, game.black, game.result)
        if rnd.bye is not None:
            state.apply_bye(rnd.bye)
        state.rounds_played += 1
    return state


def make_resolver(elos: list[int], model: str, params: outcome.SurrogateParams) -> Resolver:
    """Result resolver with a per-tournament distribution cache (player
    ids are stable, so each ordered pairing is computed once)."""
    cache: dict[tuple[int, int], object] = {}
    if model == "deterministic":

        def resolve(white: int, black: int, _stream: random.Random) -> GameResult:
            key = (white, black)
            result = cache.get(key)
            if result is None:
                result = outcome.deterministic_result(elos[white], elos[black], params)
                cache[key] = result
            return result

    else:

        def resolve(white: int, black: int, stream: random.Random) -> GameResult:
            key = (white, black)
            dist = cache.get(key)
            if dist is None:
                dist = outcome.distribution(elos[white], elos[black], params)
                cache[key] = dist
            return outcome.sample_result(dist, stream)

    return resolve
