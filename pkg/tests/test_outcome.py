import math
import random

import pytest

from swissgambit.core import GameResult
from swissgambit.outcome import (
    DRAW_THRESHOLD,
    ELO_RANGE,
    TABLE_ANCHORS,
    CalibrationError,
    OutcomeDistribution,
    SurrogateParams,
    deterministic_result,
    distribution,
    expected_score,
    fit_surrogate,
    fitted_params,
    load_params,
    max_table_residual,
    sample_result,
    save_params,
)


def test_fit_reproduces_anchor_table(params):
    assert max_table_residual(params) <= 0.01
    # frozen: the fit is deterministic, so the residual is an exact fingerprint
    assert params.residual == pytest.approx(0.00532198370252647, abs=1e-12)
    assert params.residual == pytest.approx(max_table_residual(params), abs=1e-12)


def test_fitted_params_frozen_values(params):
    assert params.sigma == pytest.approx(453.613551, abs=1e-4)
    assert params.c0 == pytest.approx(43.232398, abs=1e-4)
    assert params.c1 == pytest.approx(-0.04353074, abs=1e-6)
    assert params.d0 == pytest.approx(0.31270846, abs=1e-6)
    assert params.d1 == pytest.approx(1.78049369e-4, abs=1e-9)


def test_each_anchor_probability_is_close(params):
    for white_elo, black_elo, target in TABLE_ANCHORS:
        dist = distribution(white_elo, black_elo, params)
        for got, want in zip(dist.as_tuple(), target.as_tuple()):
            assert got == pytest.approx(want, abs=0.01)


def test_expected_score_examples(params):
    assert expected_score(1200, 1400, params) == pytest.approx(0.345, abs=1e-3)
    assert expected_score(2400, 2200, params) == pytest.approx(0.7629, abs=1e-3)
    # white advantage: equal ratings score above one half
    assert expected_score(2000, 2000, params) > 0.5


def test_distribution_sums_to_one_and_stays_in_range(params):
    rng = random.Random(5)
    lo, hi = ELO_RANGE
    for _ in range(500):
        white_elo = rng.randint(lo, hi)
        black_elo = rng.randint(lo, hi)
        dist = distribution(white_elo, black_elo, params)
        assert math.isclose(sum(dist.as_tuple()), 1.0, abs_tol=1e-12)
        for p in dist.as_tuple():
            assert 0.0 <= p <= 1.0


def test_expected_score_monotone_in_rating_gap(params):
    prev = 0.0
    for white_elo in range(1000, 2601, 100):
        e = expected_score(white_elo, 1800, params)
        assert e > prev
        prev = e


def test_draw_probability_peaks_near_equal_strength(params):
    center = distribution(1800, 1800, params).p_draw
    for gap in (400, 800):
        assert distribution(1800 + gap, 1800, params).p_draw < center
        assert distribution(1800, 1800 + gap, params).p_draw < center


def test_draw_probability_grows_with_level(params):
    assert (
        distribution(2300, 2300, params).p_draw
        > distribution(1300, 1300, params).p_draw
    )


def test_deterministic_rule_reference_results(params):
    assert deterministic_result(1200, 1400, params) is GameResult.BLACK_WINS
    assert deterministic_result(2200, 2400, params) is GameResult.DRAW
    assert deterministic_result(2400, 2200, params) is GameResult.DRAW
    assert deterministic_result(1400, 1000, params) is GameResult.WHITE_WINS
    assert DRAW_THRESHOLD == 0.20


def test_deterministic_rule_matches_threshold_everywhere(params):
    rng = random.Random(11)
    for _ in range(300):
        white_elo = rng.randint(*ELO_RANGE)
        black_elo = rng.randint(*ELO_RANGE)
        result = deterministic_result(white_elo, black_elo, params)
        p_draw = distribution(white_elo, black_elo, params).p_draw
        if p_draw >= DRAW_THRESHOLD or white_elo == black_elo:
            assert result is GameResult.DRAW
        elif white_elo > black_elo:
            assert result is GameResult.WHITE_WINS
        else:
            assert result is GameResult.BLACK_WINS


def test_equal_ratings_draw_even_below_threshold(params):
    # at the bottom of the range the draw term is under 20%, so only the
    # equal-rating fallback keeps the result symmetric
    assert distribution(1000, 1000, params).p_draw < DRAW_THRESHOLD
    assert deterministic_result(1000, 1000, params) is GameResult.DRAW


def test_sample_result_frequencies(params):
    dist = distribution(1900, 1700, params)
    rng = random.Random(99)
    counts = {GameResult.WHITE_WINS: 0, GameResult.BLACK_WINS: 0, GameResult.DRAW: 0}
    n = 100_000
    for _ in range(n):
        counts[sample_result(dist, rng)] += 1
    assert counts[GameResult.WHITE_WINS] / n == pytest.approx(dist.p_white_win, abs=0.01)
    assert counts[GameResult.BLACK_WINS] / n == pytest.approx(dist.p_black_win, abs=0.01)
    assert counts[GameResult.DRAW] / n == pytest.approx(dist.p_draw, abs=0.01)


def test_sample_result_is_reproducible(params):
    dist = distribution(1500, 1600, params)
    a = [sample_result(dist, random.Random(3)) for _ in range(10)]
    b = [sample_result(dist, random.Random(3)) for _ in range(10)]
    assert a == b


def test_duplicated_anchors_give_the_same_fit(params):
    doubled = fit_surrogate(list(TABLE_ANCHORS) * 2)
    assert doubled.sigma == pytest.approx(params.sigma, rel=1e-5)
    assert doubled.c0 == pytest.approx(params.c0, rel=1e-4)
    assert doubled.d0 == pytest.approx(params.d0, rel=1e-5)
    assert doubled.residual == pytest.approx(params.residual, rel=1e-4)


def test_fit_rejects_too_few_anchors():
    with pytest.raises(ValueError):
        fit_surrogate(TABLE_ANCHORS[:2])


def test_fit_reports_unreachable_tolerance():
    with pytest.raises(CalibrationError):
        fit_surrogate(TABLE_ANCHORS, max_residual=1e-6)


def test_save_load_round_trip(tmp_path, params):
    path = tmp_path / "params.json"
    save_params(params, str(path))
    loaded = load_params(str(path))
    assert loaded == params


def test_distribution_tuple_order():
    dist = OutcomeDistribution(0.5, 0.3, 0.2)
    assert dist.as_tuple() == (0.5, 0.3, 0.2)
    assert dist.p_draw == 0.2


def test_surrogate_params_is_value_type():
    a = SurrogateParams(400.0, 40.0, 0.0, 0.3, 0.0)
    b = SurrogateParams(400.0, 40.0, 0.0, 0.3, 0.0)
    assert a == b
