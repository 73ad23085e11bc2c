"""Tournament report file (TRF) export and import.

Writes the FIDE-style report format: one ``001`` line per player carrying
startno, name, rating, points, rank and one ten-column block per round with
opponent, color and result, plus the ``XXR`` extension line for the planned
number of rounds.  Only the fields the simulator populates are emitted; the
remaining columns (sex, title, federation, FIDE id, birth date) stay blank.

Column layout of a player line (1-based, as in the format description)::

    1-3    "001"
    5-8    starting number
    15-47  name
    49-52  rating
    81-84  points, one decimal
    86-89  rank
    92-    rounds: opponent 92-95, color 97, result 99, then +10 per round

Export is byte-stable: the same course always yields the same text, and
``import_trf(export_trf(course))`` reproduces the course exactly.
"""

from __future__ import annotations

from fractions import Fraction

from .core import Course, GameResult, PairedGame, Player, Round
from .engine import state_from_course

_RESULT_CODE = {
    GameResult.WHITE_WINS: ("1", "0"),
    GameResult.BLACK_WINS: ("0", "1"),
    GameResult.DRAW: ("=", "="),
}


def _completed_rounds(course: Course) -> int:
    """Number of leading rounds in which every game has a result."""
    done = 0
    for rnd in course.rounds:
        if any(game.result is None for game in rnd.games):
            break
        done += 1
    return done


def export_trf(course: Course) -> str:
    """Render a course (possibly a prefix) as a TRF report.

    Points and ranks cover the completed rounds only; a round that has been
    paired but not yet played contributes opponent and color columns with a
    blank result, so the file can be handed to an external pairing engine.
    """
    done = _completed_rounds(course)
    played = Course(course.players, course.rounds[:done], course.total_rounds)
    state = state_from_course(played)
    order = state.final_order()
    rank_of = {p: i + 1 for i, p in enumerate(order)}

    entries: dict[int, list[str]] = {p.id: [] for p in course.players}
    for rnd in course.rounds:
        seen = set()
        for game in rnd.games:
            if game.result is None:
                wcode = bcode = " "
            else:
                wcode_, bcode_ = _RESULT_CODE[game.result]
                wcode, bcode = wcode_, bcode_
            entries[game.white].append(f"  {game.black + 1:>4} w {wcode}")
            entries[game.black].append(f"  {game.white + 1:>4} b {bcode}")
            seen.update((game.white, game.black))
        if rnd.bye is not None:
            entries[rnd.bye].append("  0000 - U")
            seen.add(rnd.bye)
        for pid in entries:
            if pid not in seen:
                entries[pid].append(" " * 10)

    lines = [f"XXR {course.total_rounds}"]
    for player in course.players:
        pts = float(state.scores2[player.id]) / 2.0
        if abs(pts * 2 - round(pts * 2)) > 1e-9:
            raise ValueError(f"player {player.id} score {pts} is not a half-point multiple")
        head = (
            "001 "
            f"{player.id + 1:4d}"
            "  "
            "   "
            " "
            f"{'Player ' + format(player.id + 1, '04d'):<33}"
            " "
            f"{player.elo:4d}"
            " "
            "   "
            " "
            f"{'':11}"
            " "
            f"{'':10}"
            " "
            f"{pts:4.1f}"
            " "
            f"{rank_of[player.id]:4d}"
        )
        lines.append((head + "".join(entries[player.id])).rstrip())
    return "\n".join(lines) + "\n"


def _parse_block(block: str, me: int):
    """One round block -> (opponent id or None, color, result char)."""
    opp_field = block[2:6].strip()
    color = block[7:8].strip()
    result = block[9:10].strip()
    if not opp_field and not color and not result:
        return None
    opp = int(opp_field) - 1
    if opp < 0 and result == "U":
        return (me, "-", "U")  # bye marker; opponent slot unused
    return (opp, color, result)


def import_trf(text: str) -> Course:
    """Parse a report produced by :func:`export_trf` back into a Course.

    Strict about the subset of the format the exporter writes; anything
    outside it (forfeits, half-point byes, missing reciprocal entries)
    raises ValueError.
    """
    total_rounds = None
    raw_players: list[tuple[int, int, list[str]]] = []
    for line in text.splitlines():
        if line.startswith("XXR"):
            total_rounds = int(line[3:].strip())
        elif line.startswith("001"):
            startno = int(line[4:8])
            rating = int(line[48:52])
            blocks = []
            body = line
            i = 89
            while i < len(body):
                blocks.append(body[i : i + 10].ljust(10))
                i += 10
            raw_players.append((startno, rating, blocks))
    if total_rounds is None:
        raise ValueError("missing XXR round-count line")
    if not raw_players:
        raise ValueError("no player lines")
    raw_players.sort()
    ids = [startno - 1 for startno, _, _ in raw_players]
    if ids != list(range(len(ids))):
        raise ValueError("starting numbers are not dense 1..n")
    players = tuple(Player(startno - 1, rating) for startno, rating, _ in raw_players)
    n_rounds = max(len(blocks) for _, _, blocks in raw_players)

    n = len(players)
    elos = [p.elo for p in players]
    score2 = [0] * n
    rounds = []
    for r in range(n_rounds):
        games: list[PairedGame] = []
        bye = None
        parsed = {}
        for startno, _, blocks in raw_players:
            me = startno - 1
            block = blocks[r] if r < len(blocks) else " " * 10
            parsed[me] = _parse_block(block, me)
        for me, entry in parsed.items():
            if entry is None:
                raise ValueError(f"player {me} has no entry in round {r + 1}")
            opp, color, result = entry
            if result == "U":
                if bye is not None:
                    raise ValueError(f"two byes in round {r + 1}")
                bye = me
                continue
            if color != "w":
                continue  # games are created from the white side
            back = parsed.get(opp)
            if back is None or back[0] != me or back[1] != "b":
                raise ValueError(f"round {r + 1}: no reciprocal entry for {me} vs {opp}")
            if result == "1":
                res = GameResult.WHITE_WINS
            elif result == "0":
                res = GameResult.BLACK_WINS
            elif result == "=":
                res = GameResult.DRAW
            elif result == "":
                res = None
            else:
                raise ValueError(f"unsupported result code {result!r}")
            back_result = back[2]
            expect = {None: "", GameResult.WHITE_WINS: "0", GameResult.BLACK_WINS: "1", GameResult.DRAW: "="}[res]
            if back_result != expect:
                raise ValueError(f"round {r + 1}: result mismatch for {me} vs {opp}")
            games.append(PairedGame(white=me, black=opp, result=res))
        # restore board order: best-ranked pair first, standings before the round
        standings = sorted(range(n), key=lambda q: (-score2[q], -elos[q]))
        pos = {p: i for i, p in enumerate(standings)}
        games.sort(key=lambda g: min(pos[g.white], pos[g.black]))
        rounds.append(Round(index=r + 1, games=tuple(games), bye=bye))
        for game in games:
            if game.result is not None:
                score2[game.white] += game.result.white_points2
                score2[game.black] += game.result.black_points2
        if bye is not None:
            score2[bye] += 2
    return Course(players=players, rounds=tuple(rounds), total_rounds=total_rounds)
