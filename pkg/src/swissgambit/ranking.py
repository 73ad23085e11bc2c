"""Final standings, ground truth and Kendall-tau ranking quality.

The final ranking sorts by score with the tiebreak chain (Buchholz
Cut-1, Buchholz, Sonneborn-Berger, Elo, player id); the player id tail
makes the order strict without drawing lots.  Ranking quality is the
Kendall tau against the ground truth of sorting by Elo.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import engine
from .core import Course, Player

__all__ = [
    "Ranking",
    "final_ranking",
    "ground_truth",
    "tiebreak_vector",
    "kendall_tau",
    "kendall_tau_difference",
    "discordant_pairs",
]


@dataclass(frozen=True)
class Ranking:
    """Player ids from first place down, with O(1) rank lookup."""

    order: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "order", tuple(self.order))

    @cached_property
    def _positions(self) -> dict[int, int]:
        return {p: i + 1 for i, p in enumerate(self.order)}

    def rank_of(self, player_id: int) -> int:
        return self._positions[player_id]

    def __len__(self) -> int:
        return len(self.order)


def final_ranking(course: Course) -> Ranking:
    if not course.is_complete:
        raise ValueError("course is not complete")
    return Ranking(tuple(engine.state_from_course(course).final_order()))


def ground_truth(players: Sequence[Player]) -> Ranking:
    """Descending Elo; requires pairwise distinct ratings."""
    elos = [p.elo for p in players]
    if len(set(elos)) != len(elos):
        raise ValueError("duplicate elo values make the ground truth ambiguous")
    return Ranking(tuple(p.id for p in sorted(players, key=lambda q: -q.elo)))


def tiebreak_vector(course: Course, player_id: int):
    """(score, Buchholz Cut-1, Buchholz, Sonneborn-Berger, elo, id) as
    exact rationals; rankings sort by this vector, descending except for
    the id tail."""
    state = engine.state_from_course(course)
    s2, bh1, bh, sb4 = state.tiebreak_stats(player_id)
    return (
        Fraction(s2, 2),
        Fraction(bh1, 2),
        Fraction(bh, 2),
        Fraction(sb4, 4),
        state.elos[player_id],
        player_id,
    )


def _count_inversions(seq: list[int]) -> int:
    """Merge-sort inversion count; O(n log n)."""
    if len(seq) < 2:
        return 0
    mid = len(seq) // 2
    left, right = seq[:mid], seq[mid:]
    count = _count_inversions(left) + _count_inversions(right)
    merged = []
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            merged.append(left[i])
            i += 1
        else:
            count += len(left) - i
            merged.append(right[j])
            j += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    seq[:] = merged
    return count


def discordant_pairs(a: Ranking, b: Ranking) -> int:
    """Number of player pairs the two rankings order differently."""
    if set(a.order) != set(b.order) or len(a.order) != len(b.order):
        raise ValueError("rankings cover different player sets")
    pos_b = {p: i for i, p in enumerate(b.order)}
    return _count_inversions([pos_b[p] for p in a.order])


def kendall_tau(a: Ranking, b: Ranking) -> Fraction:
    """tau = 1 - 4 D / (n (n-1)) with D the discordant pair count.

    Exact fraction: 1 for identical rankings, -1 for exact reversal.
    """
    n = len(a.order)
    if n < 2:
        if set(a.order) != set(b.order):
            raise ValueError("rankings cover different player sets")
        return Fraction(1)
    d = discordant_pairs(a, b)
    return 1 - Fraction(4 * d, n * (n - 1))


def kendall_tau_difference(with_gambit: Ranking, without_gambit: Ranking, truth: Ranking) -> Fraction:
    """Positive when the gambit moved the final order closer to the truth."""
    return kendall_tau(with_gambit, truth) - kendall_tau(without_gambit, truth)
