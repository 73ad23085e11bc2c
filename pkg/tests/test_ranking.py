import random
from fractions import Fraction

import pytest

from swissgambit.core import Course, GameResult, PairedGame, Player, Round
from swissgambit.ranking import (
    Ranking,
    discordant_pairs,
    final_ranking,
    ground_truth,
    kendall_tau,
    kendall_tau_difference,
    tiebreak_vector,
)


def brute_discordant(a: Ranking, b: Ranking) -> int:
    ids = list(a.order)
    count = 0
    for i in range(len(ids)):
        for j in range(i + 1, len(ids)):
            p, q = ids[i], ids[j]
            if (a.rank_of(p) - a.rank_of(q)) * (b.rank_of(p) - b.rank_of(q)) < 0:
                count += 1
    return count


def test_tau_extremes():
    a = Ranking((0, 1, 2, 3))
    assert kendall_tau(a, a) == 1
    assert kendall_tau(a, Ranking((3, 2, 1, 0))) == -1


def test_tau_single_swap():
    a = Ranking((0, 1, 2, 3))
    b = Ranking((1, 0, 2, 3))
    assert discordant_pairs(a, b) == 1
    assert kendall_tau(a, b) == Fraction(2, 3)


def test_tau_difference_worked_example():
    # seven entries: one discordant pair versus four gives a difference of
    # exactly -2/7 (with eight entries the same counts give -3/14)
    truth = Ranking(tuple(range(7)))
    without = Ranking((1, 0, 2, 3, 4, 5, 6))
    with_gambit = Ranking((1, 0, 3, 2, 6, 4, 5))
    assert discordant_pairs(without, truth) == 1
    assert discordant_pairs(with_gambit, truth) == 4
    diff = kendall_tau_difference(with_gambit, without, truth)
    assert diff == Fraction(-2, 7)

    truth8 = Ranking(tuple(range(8)))
    without8 = Ranking((1, 0, 2, 3, 4, 5, 6, 7))
    with8 = Ranking((1, 0, 3, 2, 6, 4, 5, 7))
    assert discordant_pairs(without8, truth8) == 1
    assert discordant_pairs(with8, truth8) == 4
    assert kendall_tau_difference(with8, without8, truth8) == Fraction(-3, 14)


def test_tau_is_exact_fraction():
    tau = kendall_tau(Ranking((2, 0, 1)), Ranking((0, 1, 2)))
    assert isinstance(tau, Fraction)
    assert tau == Fraction(-1, 3)


def test_merge_counter_matches_brute_force():
    rng = random.Random(303)
    for _ in range(200):
        n = rng.randint(2, 32)
        ids = list(range(n))
        a = ids[:]
        b = ids[:]
        rng.shuffle(a)
        rng.shuffle(b)
        ra, rb = Ranking(tuple(a)), Ranking(tuple(b))
        assert discordant_pairs(ra, rb) == brute_discordant(ra, rb)
        assert discordant_pairs(ra, rb) == discordant_pairs(rb, ra)


def test_discordant_rejects_mismatched_sets():
    with pytest.raises(ValueError):
        discordant_pairs(Ranking((0, 1)), Ranking((0, 2)))
    with pytest.raises(ValueError):
        kendall_tau(Ranking((0,)), Ranking((1,)))


def test_tau_trivial_sizes():
    assert kendall_tau(Ranking((0,)), Ranking((0,))) == 1


def test_ground_truth_sorts_by_elo():
    players = (Player(0, 1500), Player(1, 1900), Player(2, 1700))
    assert ground_truth(players).order == (1, 2, 0)


def test_ground_truth_rejects_duplicate_elo():
    with pytest.raises(ValueError):
        ground_truth((Player(0, 1500), Player(1, 1500)))


def test_rank_of():
    ranking = Ranking((4, 2, 0))
    assert ranking.rank_of(4) == 1
    assert ranking.rank_of(0) == 3
    assert len(ranking) == 3


def build_course():
    # four players, three rounds, everyone meets everyone
    players = tuple(Player(i, e) for i, e in enumerate((2000, 1900, 1800, 1700)))
    rounds = (
        Round(1, (PairedGame(0, 2, GameResult.WHITE_WINS), PairedGame(3, 1, GameResult.BLACK_WINS))),
        Round(2, (PairedGame(1, 0, GameResult.DRAW), PairedGame(2, 3, GameResult.WHITE_WINS))),
        Round(3, (PairedGame(0, 3, GameResult.WHITE_WINS), PairedGame(2, 1, GameResult.BLACK_WINS))),
    )
    return Course(players, rounds, total_rounds=3)


def test_final_ranking_and_tiebreaks():
    course = build_course()
    ranking = final_ranking(course)
    # scores: 0 -> 2.5, 1 -> 2.5, 2 -> 1, 3 -> 0
    vec0 = tiebreak_vector(course, 0)
    vec1 = tiebreak_vector(course, 1)
    assert vec0[0] == vec1[0] == Fraction(5, 2)
    # Buchholz: sum of opponents' scores; Cut-1 drops the lowest
    assert vec0[2] == Fraction(5, 2) + 1 + 0
    assert vec0[1] == Fraction(5, 2) + 1
    assert vec1[2] == Fraction(5, 2) + 0 + 1
    # identical tiebreaks through Sonneborn-Berger, so Elo decides
    assert ranking.order[0] == 0
    assert ranking.order == (0, 1, 2, 3)


def test_final_ranking_requires_complete_course():
    course = build_course()
    prefix = Course(course.players, course.rounds[:2], total_rounds=3)
    with pytest.raises(ValueError):
        final_ranking(prefix)
