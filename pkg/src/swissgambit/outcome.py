"""Match outcome model: win/draw/loss probabilities from Elo ratings.

The surrogate has three ingredients:

* a logistic expected score with scale ``sigma``,
* a white advantage ``c0 + c1 * (mean_elo - 2000)`` added to the rating
  difference, so the first-move edge can shrink at higher levels,
* a draw probability ``(d0 + d1 * (mean_elo - 2000)) * 4 E (1 - E)``,
  peaked for evenly matched players and growing with mean rating.

Parameters come from a least-squares fit against anchor probabilities
(three reference rows by default); the fit is deterministic, so
every run of the laboratory shares one calibration.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .core import GameResult

__all__ = [
    "OutcomeDistribution",
    "SurrogateParams",
    "CalibrationError",
    "TABLE_ANCHORS",
    "expected_score",
    "distribution",
    "deterministic_result",
    "sample_result",
    "fit_surrogate",
    "fitted_params",
    "save_params",
    "load_params",
]

ELO_RANGE = (1000, 2600)
DRAW_THRESHOLD = 0.20  # deterministic model: draw when p_draw >= this


class CalibrationError(Exception):
    """The surrogate could not reproduce the anchor probabilities."""


@dataclass(frozen=True)
class OutcomeDistribution:
    p_white_win: float
    p_black_win: float
    p_draw: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.p_white_win, self.p_black_win, self.p_draw)


@dataclass(frozen=True)
class SurrogateParams:
    sigma: float
    c0: float
    c1: float
    d0: float
    d1: float
    residual: float = 0.0  # max |model - anchor| over the fit anchors


# Anchor rows: (white_elo, black_elo) -> (p_white_win, p_black_win, p_draw).
TABLE_ANCHORS: list[tuple[int, int, OutcomeDistribution]] = [
    (1200, 1400, OutcomeDistribution(0.26, 0.57, 0.17)),
    (2200, 2400, OutcomeDistribution(0.14, 0.55, 0.31)),
    (2400, 2200, OutcomeDistribution(0.63, 0.11, 0.26)),
]


def expected_score(white_elo: float, black_elo: float, params: SurrogateParams) -> float:
    """Expected points for White under the logistic surrogate, in (0, 1)."""
    mean = (white_elo + black_elo) / 2.0
    advantage = params.c0 + params.c1 * (mean - 2000.0)
    z = (white_elo - black_elo + advantage) / params.sigma
    return 1.0 / (1.0 + 10.0 ** (-z))


def _raw_probs(white_elo: float, black_elo: float, params: SurrogateParams) -> tuple[float, float]:
    """(p_white_win, p_draw) without dataclass wrapping; hot-path helper."""
    mean = (white_elo + black_elo) / 2.0
    advantage = params.c0 + params.c1 * (mean - 2000.0)
    z = (white_elo - black_elo + advantage) / params.sigma
    e = 1.0 / (1.0 + 10.0 ** (-z))
    intensity = params.d0 + params.d1 * (mean - 2000.0)
    p_draw = intensity * 4.0 * e * (1.0 - e)
    cap = 2.0 * min(e, 1.0 - e)
    if p_draw < 0.0:
        p_draw = 0.0
    elif p_draw > cap:
        p_draw = cap
    return e - p_draw / 2.0, p_draw


def distribution(white_elo: float, black_elo: float, params: SurrogateParams) -> OutcomeDistribution:
    p_white, p_draw = _raw_probs(white_elo, black_elo, params)
    return OutcomeDistribution(p_white, 1.0 - p_white - p_draw, p_draw)


def deterministic_result(white_elo: float, black_elo: float, params: SurrogateParams) -> GameResult:
    """Threshold rule: draw when the draw probability reaches 20%, else the
    stronger player wins.  Equal ratings fall back to a draw."""
    _, p_draw = _raw_probs(white_elo, black_elo, params)
    if p_draw >= DRAW_THRESHOLD or white_elo == black_elo:
        return GameResult.DRAW
    return GameResult.WHITE_WINS if white_elo > black_elo else GameResult.BLACK_WINS


def sample_result(dist: OutcomeDistribution, rng_stream: random.Random) -> GameResult:
    """Inverse-CDF draw in the fixed order (white win, draw, black win)."""
    u = rng_stream.random()
    if u < dist.p_white_win:
        return GameResult.WHITE_WINS
    if u < dist.p_white_win + dist.p_draw:
        return GameResult.DRAW
    return GameResult.BLACK_WINS


Anchor = tuple[float, float, OutcomeDistribution]


def _residuals(params: SurrogateParams, anchors: Sequence[Anchor]) -> list[float]:
    out = []
    for white_elo, black_elo, target in anchors:
        p_white, p_draw = _raw_probs(white_elo, black_elo, params)
        p_black = 1.0 - p_white - p_draw
        out.extend(
            (
                p_white - target.p_white_win,
                p_black - target.p_black_win,
                p_draw - target.p_draw,
            )
        )
    return out


def max_table_residual(params: SurrogateParams, anchors: Optional[Sequence[Anchor]] = None) -> float:
    """Largest absolute deviation of the model from the anchor table."""
    if anchors is None:
        anchors = TABLE_ANCHORS
    return max(abs(r) for r in _residuals(params, anchors))


def _linear_seed(anchors: Sequence[Anchor]) -> tuple[float, float, float, float, float]:
    """Analytic starting point: logit-linearize E for (sigma, c0, c1), then
    least-squares the draw intensity for (d0, d1)."""
    import numpy as np

    rows, rhs = [], []
    irows, irhs = [], []
    for white_elo, black_elo, target in anchors:
        e = target.p_white_win + target.p_draw / 2.0
        e = min(max(e, 1e-6), 1.0 - 1e-6)
        mu = (white_elo + black_elo) / 2.0 - 2000.0
        # sigma * log10(E/(1-E)) = delta + c0 + c1*mu
        rows.append([math.log10(e / (1.0 - e)), -1.0, -mu])
        rhs.append(white_elo - black_elo)
        denom = 4.0 * e * (1.0 - e)
        if denom > 1e-9:
            irows.append([1.0, mu])
            irhs.append(target.p_draw / denom)
    sol, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    sigma, c0, c1 = float(sol[0]), float(sol[1]), float(sol[2])
    if not math.isfinite(sigma) or sigma < 50.0 or sigma > 2000.0:
        sigma, c0, c1 = 400.0, 30.0, 0.0
    dsol, *_ = np.linalg.lstsq(np.array(irows), np.array(irhs), rcond=None)
    d0, d1 = float(dsol[0]), float(dsol[1])
    if not math.isfinite(d0):
        d0, d1 = 0.3, 0.0
    return sigma, c0, c1, d0, d1


def _check_grid(params: SurrogateParams) -> None:
    lo, hi = ELO_RANGE
    for white_elo in range(lo, hi + 1, 100):
        for black_elo in range(lo, hi + 1, 100):
            p_white, p_draw = _raw_probs(white_elo, black_elo, params)
            p_black = 1.0 - p_white - p_draw
            if not (0.0 <= p_white <= 1.0 and 0.0 <= p_black <= 1.0 and 0.0 <= p_draw <= 1.0):
                raise CalibrationError(
                    f"invalid probabilities at ({white_elo}, {black_elo}): "
                    f"{p_white:.4f}/{p_black:.4f}/{p_draw:.4f}"
                )


def fit_surrogate(anchors: Sequence[Anchor], max_residual: float = 0.02) -> SurrogateParams:
    """Fit (sigma, c0, c1, d0, d1) to the anchors by least squares.

    A linearized solve seeds a Nelder-Mead polish of the mean squared
    probability residual.  Raises CalibrationError when the worst residual
    stays above ``max_residual`` or the fitted model leaves [0, 1]
    anywhere on the supported Elo grid.
    """
    if len(anchors) < 3:
        raise ValueError("need at least 3 anchor rows")
    from scipy.optimize import minimize

    sigma, c0, c1, d0, d1 = _linear_seed(anchors)

    def loss(x) -> float:
        p = SurrogateParams(math.exp(x[0]), x[1], x[2], x[3], x[4])
        res = _residuals(p, anchors)
        return sum(r * r for r in res) / len(res)

    start = [math.log(sigma), c0, c1, d0, d1]
    opt = minimize(
        loss,
        start,
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-16, "maxiter": 20000, "maxfev": 20000},
    )
    x = opt.x
    fitted = SurrogateParams(math.exp(x[0]), float(x[1]), float(x[2]), float(x[3]), float(x[4]))
    worst = max(abs(r) for r in _residuals(fitted, anchors))
    fitted = SurrogateParams(
        fitted.sigma, fitted.c0, fitted.c1, fitted.d0, fitted.d1, residual=worst
    )
    if worst > max_residual:
        raise CalibrationError(f"fit residual {worst:.4f} exceeds {max_residual}")
    _check_grid(fitted)
    return fitted


@lru_cache(maxsize=1)
def fitted_params() -> SurrogateParams:
    """The shared calibration against the built-in anchor table."""
    return fit_surrogate(TABLE_ANCHORS)


def save_params(params: SurrogateParams, path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        json.dump(asdict(params), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_params(path: str) -> SurrogateParams:
    with open(path, encoding="ascii") as fh:
        data = json.load(fh)
    return SurrogateParams(**data)
