import random

import pytest

from swissgambit.core import Course, GameResult, PairedGame, Player, Round, validate_course
from swissgambit.engine import TournamentState
from swissgambit.harness import ExperimentConfig, simulate_tournament
from swissgambit.pairing import (
    ColorInfeasibleError,
    PairingInfeasibleError,
    PairingSystem,
    pair_round,
    pair_state,
)


def fresh_course(n, total_rounds=5):
    players = tuple(Player(i, 2000 - 10 * i) for i in range(n))
    return Course(players, (), total_rounds)


def pair_set(rnd):
    return {frozenset((g.white, g.black)) for g in rnd.games}


def test_first_round_golden_eight_players():
    course = fresh_course(8)
    dutch = pair_round(course, PairingSystem.DUTCH)
    assert pair_set(dutch) == {
        frozenset((0, 4)),
        frozenset((1, 5)),
        frozenset((2, 6)),
        frozenset((3, 7)),
    }
    burstein = pair_round(course, PairingSystem.BURSTEIN)
    assert pair_set(burstein) == {
        frozenset((0, 7)),
        frozenset((1, 6)),
        frozenset((2, 5)),
        frozenset((3, 4)),
    }
    monrad = pair_round(course, PairingSystem.MONRAD)
    assert pair_set(monrad) == {
        frozenset((0, 1)),
        frozenset((2, 3)),
        frozenset((4, 5)),
        frozenset((6, 7)),
    }


def test_first_round_boards_are_ordered():
    rnd = pair_round(fresh_course(8), PairingSystem.DUTCH)
    tops = [min(g.white, g.black) for g in rnd.games]
    assert tops == sorted(tops)


def test_pair_round_is_pure():
    course = fresh_course(16)
    a = pair_round(course, PairingSystem.DUTCH)
    b = pair_round(course, PairingSystem.DUTCH)
    assert a == b


def test_pairing_system_parses_from_string():
    assert PairingSystem("dutch") is PairingSystem.DUTCH
    assert PairingSystem("burstein") is PairingSystem.BURSTEIN
    assert PairingSystem("monrad") is PairingSystem.MONRAD
    with pytest.raises(ValueError):
        PairingSystem("roundrobin")


def play_course(seed, players=32, rounds=5, system="dutch", model="probabilistic"):
    config = ExperimentConfig(
        players=players,
        rounds=rounds,
        model=model,
        heuristic="optimal-det" if model == "deterministic" else "p-value",
        pairing_system=system,
    )
    course, _ = simulate_tournament(config, config.tournament_seed(seed))
    return course


@pytest.mark.parametrize("system", ["dutch", "burstein", "monrad"])
def test_simulated_courses_are_valid(system):
    for seed in range(30):
        course = play_course(seed, system=system)
        assert validate_course(course) == []


def test_valid_courses_with_many_rounds():
    for seed in range(8):
        course = play_course(seed, players=16, rounds=7)
        assert validate_course(course) == []
        assert len(course.rounds) == 7


def test_odd_player_count_gets_rotating_bye():
    for seed in range(10):
        course = play_course(seed, players=9, rounds=5)
        assert validate_course(course) == []
        byes = [rnd.bye for rnd in course.rounds]
        assert all(b is not None for b in byes)
        # nobody receives two byes while others have had none
        assert len(set(byes)) == len(byes)


def test_bye_goes_to_lowest_standing_newcomer():
    course = fresh_course(5, total_rounds=5)
    rnd = pair_round(course, PairingSystem.DUTCH)
    assert rnd.bye == 4


def test_no_rematches_across_course():
    for seed in range(10):
        course = play_course(seed, players=12, rounds=7)
        seen = set()
        for rnd in course.rounds:
            for game in rnd.games:
                key = frozenset((game.white, game.black))
                assert key not in seen
                seen.add(key)


def test_color_balance_within_bounds():
    for seed in range(10):
        course = play_course(seed, players=16, rounds=6)
        diff = {p.id: 0 for p in course.players}
        for k, rnd in enumerate(course.rounds):
            last = k == course.total_rounds - 1
            for game in rnd.games:
                diff[game.white] += 1
                diff[game.black] -= 1
            limit = 3 if last else 2
            assert all(abs(d) <= limit for d in diff.values())


def test_pair_round_rejects_unresolved_and_complete_courses():
    players = tuple(Player(i, 1600 - i) for i in range(4))
    pending = Course(players, (Round(1, (PairedGame(0, 2), PairedGame(3, 1))),), 3)
    with pytest.raises(ValueError):
        pair_round(pending)
    done = Course(players, (), total_rounds=0)
    with pytest.raises(ValueError):
        pair_round(done)


def test_pair_round_rejects_invalid_history():
    players = tuple(Player(i, 1600 - i) for i in range(4))
    rounds = (
        Round(1, (PairedGame(0, 1, GameResult.DRAW), PairedGame(2, 3, GameResult.DRAW))),
        Round(2, (PairedGame(1, 0, GameResult.DRAW), PairedGame(2, 3, GameResult.DRAW))),
    )
    with pytest.raises(ValueError):
        pair_round(Course(players, rounds, 4))


def test_two_players_single_round():
    rnd = pair_round(fresh_course(2, total_rounds=1))
    assert pair_set(rnd) == {frozenset((0, 1))}
    assert rnd.bye is None


def test_pair_state_runs_on_engine_state():
    elos = [2000, 1900, 1800, 1700, 1600, 1500]
    state = TournamentState(elos)
    pairs, bye = pair_state(state, PairingSystem.DUTCH)
    assert bye is None
    assert {frozenset(p) for p in pairs} == {
        frozenset((0, 3)),
        frozenset((1, 4)),
        frozenset((2, 5)),
    }


def test_exhausted_small_field_raises():
    # four players, already met everyone: no legal fourth round exists
    players = tuple(Player(i, 1600 - i) for i in range(4))
    rounds = (
        Round(1, (PairedGame(0, 2, GameResult.WHITE_WINS), PairedGame(3, 1, GameResult.WHITE_WINS))),
        Round(2, (PairedGame(1, 0, GameResult.WHITE_WINS), PairedGame(2, 3, GameResult.WHITE_WINS))),
        Round(3, (PairedGame(0, 3, GameResult.WHITE_WINS), PairedGame(1, 2, GameResult.WHITE_WINS))),
    )
    course = Course(players, rounds, total_rounds=4)
    with pytest.raises((PairingInfeasibleError, ColorInfeasibleError)):
        pair_round(course)
