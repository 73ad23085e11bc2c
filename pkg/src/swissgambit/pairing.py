"""Swiss pairing engines: Dutch (default), Burstein and Monrad.

Each round, players are grouped into score brackets and paired within
them.  The Dutch and Burstein systems split a bracket into an upper and a
lower half and walk through transpositions of the lower half (then single
upper/lower exchanges) until every pair is legal; Monrad pairs adjacent
ranks with backtracking.  A maximum-weight-matching fallback handles
brackets the rule-based search cannot resolve, and players without a
legal opponent float into the next bracket.

Legality of a pair means: the two have not met before, and a color
assignment exists that keeps both inside the color rules (difference of
at most 2, never three identical colors in a row; the difference bound is
relaxed in the final round only).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import Course, GameResult, PairedGame, Player, Round, scores_after, validate_course

__all__ = [
    "PairingSystem",
    "ColorHistory",
    "Bracket",
    "PairingInfeasibleError",
    "ColorInfeasibleError",
    "pair_round",
    "pair_state",
    "assign_colors",
]

_SEARCH_NODE_CAP = 800  # backtracking guard before falling back to matching


class PairingSystem(str, Enum):
    DUTCH = "dutch"
    BURSTEIN = "burstein"
    MONRAD = "monrad"


class _SearchBudgetExhausted(Exception):
    pass


class PairingInfeasibleError(Exception):
    """No legal pairing exists for the round, even after all fallbacks."""


class ColorInfeasibleError(Exception):
    """Neither color orientation of a pair is legal."""


@dataclass(frozen=True)
class ColorHistory:
    """Sequence of colors a player has had, e.g. 'WBW'."""

    sequence: str = ""

    @property
    def difference(self) -> int:
        return self.sequence.count("W") - self.sequence.count("B")

    @property
    def last_two(self) -> str:
        return self.sequence[-2:]


@dataclass(frozen=True)
class Bracket:
    score: Fraction
    members: tuple[int, ...]


# ---------------------------------------------------------------------------
# color allocation


def _color_ok(diff: int, last_two: str, color: str, relax_diff: bool) -> bool:
    if len(last_two) == 2 and last_two[0] == last_two[1] == color:
        return False  # would make three in a row; never relaxed
    if not relax_diff:
        after = diff + (1 if color == "W" else -1)
        if after > 2 or after < -2:
            return False
    return True


def _orient(
    a: int,
    b: int,
    fact_a: tuple[int, str],
    fact_b: tuple[int, str],
    a_ranked_higher: bool,
    relax_diff: bool,
) -> Optional[tuple[int, int]]:
    """Pick (white, black) for a pair, or None when neither way is legal.

    fact = (color difference, last two colors).  Precedence: absolute
    constraints first (encoded in legality), then alternation for the
    player with the larger |difference|, then alternation for the
    higher-ranked player; with no history the higher-ranked player gets
    White.
    """
    legal = []
    for white, black, fw, fb in ((a, b, fact_a, fact_b), (b, a, fact_b, fact_a)):
        if _color_ok(fw[0], fw[1], "W", relax_diff) and _color_ok(fb[0], fb[1], "B", relax_diff):
            legal.append((white, black))
    if not legal:
        return None
    if len(legal) == 1:
        return legal[0]
    if abs(fact_a[0]) > abs(fact_b[0]):
        chooser, fact = a, fact_a
    elif abs(fact_b[0]) > abs(fact_a[0]):
        chooser, fact = b, fact_b
    else:
        chooser, fact = (a, fact_a) if a_ranked_higher else (b, fact_b)
    last = fact[1][-1:]
    wants = "W" if last in ("", "B") else "B"
    if wants == "W":
        return (chooser, b if chooser == a else a)
    return (b if chooser == a else a, chooser)


def assign_colors(
    pair: tuple[Player, Player],
    histories: tuple[ColorHistory, ColorHistory],
    scores: tuple[Fraction, Fraction] = (Fraction(0), Fraction(0)),
    last_round: bool = False,
) -> tuple[Player, Player]:
    """Orient a pair as (white, black) under the color rules.

    Raises ColorInfeasibleError when both orientations are illegal, which
    signals the pairing search to try a different opponent.
    """
    a, b = pair
    fact_a = (histories[0].difference, histories[0].last_two)
    fact_b = (histories[1].difference, histories[1].last_two)
    a_higher = (-scores[0], -a.elo) < (-scores[1], -b.elo)
    picked = _orient(a.id, b.id, fact_a, fact_b, a_higher, relax_diff=False)
    if picked is None and last_round:
        picked = _orient(a.id, b.id, fact_a, fact_b, a_higher, relax_diff=True)
    if picked is None:
        raise ColorInfeasibleError(f"no legal colors for {a.id} vs {b.id}")
    by_id = {a.id: a, b.id: b}
    return by_id[picked[0]], by_id[picked[1]]


# ---------------------------------------------------------------------------
# bracket matching


class _RoundContext:
    """Per-call scratch: player facts, pair cache, rank positions.

    The cache maps an unordered pair key to False (illegal: rematch or no
    legal colors) or to the oriented (white, black) tuple, so feasibility
    checks and the final color assignment share one computation.
    """

    __slots__ = ("opponents", "facts", "rank_pos", "relax_diff", "pair_cache")

    def __init__(self, order, opponents, colors, relax_diff):
        self.opponents = opponents
        self.facts = {}
        for p in order:
            seq = colors[p]
            self.facts[p] = (seq.count("W") - seq.count("B"), seq[-2:])
        self.rank_pos = {p: i for i, p in enumerate(order)}
        self.relax_diff = relax_diff
        self.pair_cache: dict[int, object] = {}

    def pair_info(self, a: int, b: int):
        """False if the pair is illegal, else its (white, black) orientation."""
        key = a * 4096 + b if a < b else b * 4096 + a
        cached = self.pair_cache.get(key)
        if cached is None:
            if b in self.opponents[a]:
                cached = False
            else:
                oriented = _orient(
                    a,
                    b,
                    self.facts[a],
                    self.facts[b],
                    self.rank_pos[a] < self.rank_pos[b],
                    self.relax_diff,
                )
                cached = oriented if oriented is not None else False
            self.pair_cache[key] = cached
        return cached

    def feasible(self, a: int, b: int) -> bool:
        return self.pair_info(a, b) is not False


def _halved_search(members: Sequence[int], ctx: _RoundContext, reverse_lower: bool):
    """Pair an even group by halves: member i of the upper half against the
    i-th remaining member of the lower-half preference sequence.  The
    backtracking order realizes transpositions of the lower half in
    lexicographic order.  Returns pairs or None."""
    k = len(members) // 2
    upper = list(members[:k])
    lower = list(members[k:])
    if reverse_lower:
        lower.reverse()
    nodes = 0  # shared budget across the plain search and all exchanges
    cache = ctx.pair_cache
    info = ctx.pair_info

    def search(i: int, remaining: tuple[int, ...], acc: list) -> Optional[list]:
        nonlocal nodes
        if i == k:
            return acc
        nodes += 1
        if nodes > _SEARCH_NODE_CAP:
            return None
        a = upper[i]
        for j, b in enumerate(remaining):
            ok = cache.get(a * 4096 + b if a < b else b * 4096 + a)
            if ok is None:
                ok = info(a, b)
            if ok:
                found = search(i + 1, remaining[:j] + remaining[j + 1 :], acc + [(a, b)])
                if found is not None:
                    return found
        return None

    found = search(0, tuple(lower), [])
    if found is not None:
        return found
    # single upper/lower exchanges, nearest to the half boundary first
    for i in range(k - 1, -1, -1):
        for j in range(k):
            if nodes > _SEARCH_NODE_CAP:
                return None
            swapped = list(members)
            swapped[i], swapped[k + j] = swapped[k + j], swapped[i]
            upper = sorted(swapped[:k], key=ctx.rank_pos.__getitem__)
            lower = sorted(swapped[k:], key=ctx.rank_pos.__getitem__)
            if reverse_lower:
                lower.reverse()
            found = search(0, tuple(lower), [])
            if found is not None:
                return found
    return None


def _adjacent_search(members: Sequence[int], ctx: _RoundContext):
    """Monrad: the highest unpaired player meets the next-ranked legal
    opponent; exhaustive backtracking in rank order."""
    nodes = 0
    cache = ctx.pair_cache
    info = ctx.pair_info

    def search(remaining: tuple[int, ...], acc: list) -> Optional[list]:
        nonlocal nodes
        if not remaining:
            return acc
        nodes += 1
        if nodes > _SEARCH_NODE_CAP:
            return None
        a = remaining[0]
        for j in range(1, len(remaining)):
            b = remaining[j]
            ok = cache.get(a * 4096 + b if a < b else b * 4096 + a)
            if ok is None:
                ok = info(a, b)
            if ok:
                found = search(remaining[1:j] + remaining[j + 1 :], acc + [(a, b)])
                if found is not None:
                    return found
        return None

    return search(tuple(members), [])


def _match_even_group(members: Sequence[int], ctx: _RoundContext, system: PairingSystem):
    if system is PairingSystem.MONRAD:
        return _adjacent_search(members, ctx)
    return _halved_search(members, ctx, reverse_lower=(system is PairingSystem.BURSTEIN))


def _best_matching(
    members: Sequence[int],
    ctx: _RoundContext,
    system: PairingSystem,
    cap: int = 4000,
    widen: bool = True,
):
    """Maximum feasible matching by staged complete backtracking.

    Stage t allows at most t unmatched players; the first stage (t = pool
    parity) is a plain perfect-matching search, and each failed stage
    proves t unmatched impossible before t + 2 is tried, so the result is
    a true maximum matching.  Candidates walk outward from each system's
    ideal partner and leaving a player out is the last resort, so a perfect
    matching is found in the system's preference order and unmatched
    players skew toward the bottom.  With ``widen`` false only the perfect
    stage runs.  Returns (pairs, unmatched, capped); capped means the node
    budget ran out and the result may be incomplete.
    """
    nodes = 0
    cache = ctx.pair_cache
    info = ctx.pair_info
    n = len(members)

    def search(remaining: tuple[int, ...], acc: list, out: list, max_out: int):
        nonlocal nodes
        if not remaining:
            return acc, out
        nodes += 1
        if nodes > cap:
            raise _SearchBudgetExhausted
        a = remaining[0]
        rest = remaining[1:]
        m = len(rest)
        if system is PairingSystem.MONRAD:
            ideal = 0
        elif system is PairingSystem.BURSTEIN:
            ideal = m - 1
        else:
            ideal = len(remaining) // 2 - 1
        for step in range(m):
            if step == 0:
                candidates = (ideal,)
            else:
                candidates = (ideal - step, ideal + step)
            for j in candidates:
                if j < 0 or j >= m:
                    continue
                b = rest[j]
                ok = cache.get(a * 4096 + b if a < b else b * 4096 + a)
                if ok is None:
                    ok = info(a, b)
                if ok:
                    found = search(rest[:j] + rest[j + 1 :], acc + [(a, b)], out, max_out)
                    if found is not None:
                        return found
        if len(out) < max_out:
            return search(rest, acc, out + [a], max_out)
        return None

    last_stage = n if widen else n % 2
    for max_out in range(n % 2, last_stage + 1, 2):
        try:
            found = search(tuple(members), [], [], max_out)
        except _SearchBudgetExhausted:
            return [], list(members), True
        if found is not None:
            pairs, out = found
            return pairs, out, False
    return [], list(members), False


def _ideal_partner(i: int, size: int, system: PairingSystem) -> int:
    k = size // 2
    if system is PairingSystem.MONRAD:
        return i + 1
    if system is PairingSystem.BURSTEIN:
        return size - 1 - i
    return i + k


def _matching_fallback(members: Sequence[int], ctx: _RoundContext, system: PairingSystem):
    """Maximum-weight matching over the group's legal pairs.  Rematches are
    simply absent from the graph; weights prefer each system's ideal
    partner.  Returns (pairs, unmatched)."""
    import networkx as nx

    pos = {p: i for i, p in enumerate(members)}
    graph = nx.Graph()
    graph.add_nodes_from(members)
    size = len(members)
    for i in range(size):
        for j in range(i + 1, size):
            a, b = members[i], members[j]
            if ctx.feasible(a, b):
                penalty = abs(j - _ideal_partner(i, size, system))
                graph.add_edge(a, b, weight=10_000 - penalty)
    mate = nx.max_weight_matching(graph, maxcardinality=True)
    pairs = []
    used = set()
    for x, y in mate:
        a, b = (x, y) if ctx.rank_pos[x] < ctx.rank_pos[y] else (y, x)
        pairs.append((a, b))
        used.update((a, b))
    pairs.sort(key=lambda ab: ctx.rank_pos[ab[0]])
    unmatched = [p for p in members if p not in used]
    return pairs, unmatched


def _global_fallback(players: Sequence[int], ctx: _RoundContext, scores2) -> list[tuple[int, int]]:
    """Last resort: one matching over all players, weighted toward score
    proximity and rank proximity."""
    import networkx as nx

    graph = nx.Graph()
    graph.add_nodes_from(players)
    for i in range(len(players)):
        for j in range(i + 1, len(players)):
            a, b = players[i], players[j]
            if ctx.feasible(a, b):
                gap = abs(float(scores2[a]) - float(scores2[b]))
                weight = 1_000_000 - int(gap * 1000) - (j - i)
                graph.add_edge(a, b, weight=weight)
    mate = nx.max_weight_matching(graph, maxcardinality=True)
    if 2 * len(mate) != len(players):
        raise PairingInfeasibleError("no complete legal pairing exists")
    pairs = []
    for x, y in mate:
        a, b = (x, y) if ctx.rank_pos[x] < ctx.rank_pos[y] else (y, x)
        pairs.append((a, b))
    pairs.sort(key=lambda ab: ctx.rank_pos[ab[0]])
    return pairs


def _pair_pool(
    pool: list[int], ctx: _RoundContext, system: PairingSystem, out_floats: list[int]
) -> list[tuple[int, int]]:
    """Pair one bracket pool; members without a legal opponent are appended
    to ``out_floats`` (in rank order) for the next bracket."""
    if not pool:
        return []
    if len(pool) % 2 == 1:
        # float one member, preferably from the bottom
        for ci in range(len(pool) - 1, -1, -1):
            rest = pool[:ci] + pool[ci + 1 :]
            done = _match_even_group(rest, ctx, system)
            if done is not None:
                out_floats.append(pool[ci])
                return done
    else:
        done = _match_even_group(pool, ctx, system)
        if done is not None:
            return done
    # The rule search failed, so let a maximum matching decide who floats,
    # then redo the rule search on the players who stay so the kept pairs
    # follow the system's order.
    pairs, left, capped = _best_matching(pool, ctx, system)
    if capped:
        mpairs, mleft = _matching_fallback(pool, ctx, system)
        if len(mpairs) > len(pairs):
            pairs, left = mpairs, mleft
    if not left:
        return pairs
    out_floats.extend(left)
    stay = [p for p in pool if p not in set(left)]
    if not stay:
        return []
    done = _match_even_group(stay, ctx, system)
    return done if done is not None else pairs


# ---------------------------------------------------------------------------
# round assembly


def pair_state(state, system: PairingSystem, last_round: bool = False):
    """Pair one round from live tournament state.

    ``state`` needs: elos, scores2 (twice the score, int or Fraction),
    opponents (set per player), colors (history string per player) and
    had_bye (set).  Returns (oriented pairs, bye player or None).
    """
    n = len(state.elos)
    order = sorted(range(n), key=lambda p: (-state.scores2[p], -state.elos[p]))
    ctx = _RoundContext(order, state.opponents, state.colors, relax_diff=last_round)

    bye = None
    if n % 2 == 1:
        for p in reversed(order):
            if p not in state.had_bye:
                bye = p
                break
        else:
            bye = order[-1]  # everyone has had one; give it to the tail again
        order = [p for p in order if p != bye]

    groups: list[list[int]] = []
    for p in order:
        if groups and state.scores2[groups[-1][0]] == state.scores2[p]:
            groups[-1].append(p)
        else:
            groups.append([p])

    group_pairs: list[list[tuple[int, int]]] = []
    entering: list[list[int]] = []  # floaters carried into each group
    carried: list[int] = []
    for group in groups:
        entering.append(list(carried))
        pool = carried + group
        carried = []
        group_pairs.append(_pair_pool(pool, ctx, system, out_floats=carried))

    if carried:
        # The tail could not absorb its floaters.  Re-pair a merged tail,
        # widening one bracket at a time, before the all-player matching.
        repaired = False
        for back in range(len(groups) - 2, -1, -1):
            tail: list[int] = list(entering[back])
            for g in groups[back:]:
                tail.extend(g)
            if len(tail) % 2 == 1:
                continue
            done, left, capped = _best_matching(tail, ctx, system, widen=False)
            if left and capped:
                done, left = _matching_fallback(tail, ctx, system)
            if not left:
                group_pairs = group_pairs[:back] + [done]
                repaired = True
                break
        if not repaired:
            group_pairs = [_global_fallback(order, ctx, state.scores2)]

    pairs = [pair for chunk in group_pairs for pair in chunk]
    # board order: best-ranked pair first, by the standings before this round
    pairs.sort(key=lambda ab: min(ctx.rank_pos[ab[0]], ctx.rank_pos[ab[1]]))

    oriented = []
    for a, b in pairs:
        colors = ctx.pair_info(a, b)
        if not colors:  # cannot happen for feasible pairs
            raise PairingInfeasibleError(f"colors infeasible for {a} vs {b}")
        oriented.append(colors)
    return oriented, bye


class _CourseView:
    """Pairing-relevant arrays rebuilt from an immutable course."""

    __slots__ = ("elos", "scores2", "opponents", "colors", "had_bye")

    def __init__(self, course: Course):
        n = len(course.players)
        self.elos = [0] * n
        for p in course.players:
            self.elos[p.id] = p.elo
        table = scores_after(course, len(course.rounds))
        self.scores2 = [table[p] * 2 for p in range(n)]
        self.scores2 = [int(s) if s.denominator == 1 else s for s in self.scores2]
        self.opponents = [set() for _ in range(n)]
        self.colors = [""] * n
        self.had_bye = set()
        for rnd in course.rounds:
            for game in rnd.games:
                self.opponents[game.white].add(game.black)
                self.opponents[game.black].add(game.white)
                self.colors[game.white] += "W"
                self.colors[game.black] += "B"
            if rnd.bye is not None:
                self.had_bye.add(rnd.bye)


def pair_round(course: Course, system: PairingSystem = PairingSystem.DUTCH) -> Round:
    """Compute the next round's pairing for a course prefix.

    Pure function of the course: repeated calls return identical rounds.
    """
    if len(course.rounds) >= course.total_rounds:
        raise ValueError("course already has all its rounds")
    for rnd in course.rounds:
        for game in rnd.games:
            if game.result is None:
                raise ValueError(f"round {rnd.index} has unresolved games")
    problems = validate_course(course)
    if problems:
        raise ValueError("invalid course: " + "; ".join(problems))

    view = _CourseView(course)
    last = len(course.rounds) + 1 == course.total_rounds
    oriented, bye = pair_state(view, system, last_round=last)
    games = tuple(PairedGame(white, black) for white, black in oriented)
    return Round(index=len(course.rounds) + 1, games=games, bye=bye)
