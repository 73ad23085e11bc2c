"""Command-line client for the simulation service.

Every subcommand talks to the HTTP API; by default the app is mounted
in-process, so no daemon is needed, and ``--server`` (or the
SWISSGAMBIT_SERVER environment variable) points the same commands at a
running instance instead.  Campaign outputs land in per-campaign
subdirectories of --out (default from SWISSGAMBIT_OUT, then ./out),
with a combined.csv across swept campaigns at the top level.

Exit codes: 0 success, 1 usage error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import warnings
from pathlib import Path
from typing import Optional

from .harness import (
    GAMBIT_COLUMNS,
    HEURISTICS,
    TOURNAMENT_COLUMNS,
    ExperimentConfig,
    _cell,
)
from .presets import PRESETS

USAGE_ERROR = 1
RUNTIME_ERROR = 2

COMBINED_COLUMNS = ("label", "rounds", "range_size", "model", "heuristic") + TOURNAMENT_COLUMNS

_MODEL_ALIAS = {"det": "deterministic", "prob": "probabilistic"}
_IMPLIED_HEURISTIC = {"deterministic": "optimal-det", "probabilistic": "p-value"}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


class ServiceClient:
    """Minimal HTTP wrapper: embedded app or remote base URL."""

    def __init__(self, server: Optional[str] = None):
        if server:
            import httpx

            self._http = httpx.Client(base_url=server, timeout=None)
        else:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service import create_app

            self._http = TestClient(create_app())

    def get(self, path: str):
        return self._http.get(path)

    def post(self, path: str, payload: dict):
        return self._http.post(path, json=payload)


# ---------------------------------------------------------------------------
# argument wiring


def build_parser() -> _Parser:
    parser = _Parser(prog="swissgambit", description=__doc__.splitlines()[0])
    parser.add_argument("--server", default=os.environ.get("SWISSGAMBIT_SERVER"),
                        help="base URL of a running service (default: run in-process)")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run one or more gambit campaigns")
    _config_flags(run, campaign=True)
    run.add_argument("--preset", choices=list(PRESETS), help="named experiment preset")
    run.add_argument("--out", default=os.environ.get("SWISSGAMBIT_OUT", "out"),
                     help="output directory (env SWISSGAMBIT_OUT, default ./out)")

    sim = commands.add_parser("simulate", help="play a single tournament and print it")
    _config_flags(sim, campaign=False)
    sim.add_argument("--tournament", type=int, default=0, metavar="INDEX",
                     help="tournament index within the campaign seed sequence")
    sim.add_argument("--format", choices=["table", "trf", "json"], default="table")

    commands.add_parser("calibrate", help="fit the outcome model and print its parameters")

    commands.add_parser("presets", help="list the experiment presets")

    pair = commands.add_parser("pair", help="pair the next round of a TRF tournament")
    pair.add_argument("trf", help="TRF file path, or - for stdin")
    pair.add_argument("--pairing", choices=["dutch", "burstein", "monrad"], default="dutch")

    serve = commands.add_parser("serve", help="expose the service over HTTP")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    return parser


def _config_flags(parser: argparse.ArgumentParser, campaign: bool) -> None:
    parser.add_argument("--players", type=int)
    parser.add_argument("--rounds", type=int)
    parser.add_argument("--strength-range", nargs=2, type=int, metavar=("LO", "HI"))
    parser.add_argument("--model", choices=sorted(_MODEL_ALIAS) + sorted(_MODEL_ALIAS.values()))
    parser.add_argument("--pairing", choices=["dutch", "burstein", "monrad"])
    parser.add_argument("--seed", type=int, help="campaign master seed")
    if campaign:
        parser.add_argument("--tournaments", type=int)
        parser.add_argument("--sample-size", type=int)
        parser.add_argument("--heuristic", choices=list(HEURISTICS))
        parser.add_argument("--workers", type=int)
        parser.add_argument("--alpha", type=float)


def _explicit_overrides(args: argparse.Namespace) -> dict:
    """Config fields the user actually set on the command line."""
    mapping = {
        "players": "players",
        "rounds": "rounds",
        "tournaments": "tournaments",
        "sample_size": "sample_size",
        "heuristic": "heuristic",
        "workers": "workers",
        "alpha": "alpha",
        "seed": "master_seed",
        "pairing": "pairing_system",
    }
    out = {}
    for arg, field in mapping.items():
        value = getattr(args, arg, None)
        if value is not None:
            out[field] = value
    if getattr(args, "strength_range", None) is not None:
        out["strength_range"] = tuple(args.strength_range)
    if getattr(args, "model", None) is not None:
        out["model"] = _MODEL_ALIAS.get(args.model, args.model)
    return out


def _campaign_configs(args: argparse.Namespace) -> list[tuple[str, ExperimentConfig]]:
    """Expand preset and flags into labelled campaigns.

    Precedence: defaults < implied heuristic for --model < preset < flags.
    """
    explicit = _explicit_overrides(args)
    implied = {}
    if "model" in explicit and "heuristic" not in explicit:
        implied["heuristic"] = _IMPLIED_HEURISTIC[explicit["model"]]
    if args.preset:
        campaigns = PRESETS[args.preset].campaigns()
    else:
        campaigns = [("campaign", {})]
    resolved = []
    for label, preset_fields in campaigns:
        merged = {**implied, **preset_fields, **explicit}
        config = ExperimentConfig(**merged)
        config.validate(for_scan=True)
        resolved.append((label, config))
    return resolved


# ---------------------------------------------------------------------------
# subcommands


def _cmd_run(args, client: ServiceClient) -> int:
    try:
        campaigns = _campaign_configs(args)
    except ValueError as exc:
        print(f"swissgambit run: {exc}", file=sys.stderr)
        return USAGE_ERROR

    out_root = Path(args.out)
    out_root.mkdir(parents=True, exist_ok=True)
    combined: list[list] = []
    for label, config in campaigns:
        payload = {
            "config": _config_payload(config),
            "out_dir": str(out_root / label),
        }
        response = client.post("/campaigns/run", payload)
        if response.status_code != 200:
            return _report_http_error("campaign", response)
        body = response.json()
        problems = _validate_outputs(out_root / label, config)
        if problems:
            print("output validation failed: " + "; ".join(problems), file=sys.stderr)
            return RUNTIME_ERROR
        agg = body["summary"]["aggregates"]
        print(
            f"{label}: possibilities={agg['gambit_possibilities']}"
            f" ({agg['mean_possibilities_per_tournament']:.2f}/tournament)"
            f" total_rank_diff={agg['total_rank_diff']}"
            f" mean_rank_diff={_fmt(agg['mean_rank_diff'])}"
            f" mean_tau_diff={_fmt(agg['mean_tau_diff'])}"
        )
        lo, hi = config.strength_range
        prefix = [label, config.rounds, hi - lo, config.model, config.heuristic]
        combined.extend(prefix + row for row in body["tournaments"]["rows"])

    with open(out_root / "combined.csv", "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(COMBINED_COLUMNS)
        for row in combined:
            writer.writerow([_cell(value) for value in row])
    return 0


def _cmd_simulate(args, client: ServiceClient) -> int:
    overrides = _explicit_overrides(args)
    overrides.setdefault("heuristic", _IMPLIED_HEURISTIC[overrides.get("model", "deterministic")])
    config = ExperimentConfig(**overrides)
    try:
        config.validate(for_scan=False)
    except ValueError as exc:
        print(f"swissgambit simulate: {exc}", file=sys.stderr)
        return USAGE_ERROR
    response = client.post(
        "/simulate",
        {"config": _config_payload(config), "tournament_index": args.tournament},
    )
    if response.status_code != 200:
        return _report_http_error("simulate", response)
    body = response.json()
    if args.format == "json":
        print(json.dumps(body, indent=2))
        return 0
    if args.format == "trf":
        trf = client.post("/trf/export", {"course": body["course"]})
        if trf.status_code != 200:
            return _report_http_error("trf export", trf)
        print(trf.json()["trf"])
        return 0
    elos = {p["id"]: p["elo"] for p in body["course"]["players"]}
    print(f"seed {body['seed']}")
    for place, pid in enumerate(body["ranking"], start=1):
        print(f"{place:3d}. player {pid:3d}  elo {elos[pid]}")
    return 0


def _cmd_calibrate(args, client: ServiceClient) -> int:
    response = client.post("/calibrate", {})
    if response.status_code != 200:
        return _report_http_error("calibrate", response)
    print(json.dumps(response.json(), indent=2))
    return 0


def _cmd_presets(args, client: ServiceClient) -> int:
    response = client.get("/presets")
    if response.status_code != 200:
        return _report_http_error("presets", response)
    for preset in response.json():
        print(f"{preset['name']:22s} {preset['description']}")
        for campaign in preset["campaigns"]:
            cfg = campaign["config"]
            lo, hi = cfg["strength_range"]
            print(
                f"    {campaign['label']:12s} {cfg['model']:13s} {cfg['heuristic']:14s}"
                f" rounds={cfg['rounds']} tournaments={cfg['tournaments']}"
                f" elo={lo}-{hi}"
            )
    return 0


def _cmd_pair(args, client: ServiceClient) -> int:
    if args.trf == "-":
        text = sys.stdin.read()
    else:
        try:
            text = Path(args.trf).read_text()
        except OSError as exc:
            print(f"swissgambit pair: {exc}", file=sys.stderr)
            return RUNTIME_ERROR
    imported = client.post("/trf/import", {"trf": text})
    if imported.status_code != 200:
        return _report_http_error("trf import", imported)
    course = imported.json()["course"]
    paired = client.post("/pairing/next-round", {"course": course, "system": args.pairing})
    if paired.status_code != 200:
        return _report_http_error("pairing", paired)
    rnd = paired.json()["round"]
    print(f"round {rnd['index']}")
    for board, game in enumerate(rnd["games"], start=1):
        print(f"{board:3d}. {game['white'] + 1:3d} - {game['black'] + 1:3d}")
    if rnd["bye"] is not None:
        print(f"bye: {rnd['bye'] + 1}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


# ---------------------------------------------------------------------------
# helpers


def _config_payload(config: ExperimentConfig) -> dict:
    payload = config.__dict__.copy()
    payload["strength_range"] = list(config.strength_range)
    return payload


def _fmt(value) -> str:
    return "n/a" if value is None else f"{value:.4f}"


def _report_http_error(what: str, response) -> int:
    try:
        detail = response.json().get("detail", response.text)
    except Exception:
        detail = response.text
    print(f"swissgambit {what}: {detail}", file=sys.stderr)
    return USAGE_ERROR if response.status_code == 422 else RUNTIME_ERROR


def _validate_outputs(out_dir: Path, config: ExperimentConfig) -> list[str]:
    """Schema check of one campaign directory; empty list means valid."""
    problems = []
    for name, columns in (("gambits.csv", GAMBIT_COLUMNS), ("tournaments.csv", TOURNAMENT_COLUMNS)):
        path = out_dir / name
        if not path.exists():
            problems.append(f"{name} missing")
            continue
        with open(path, newline="") as handle:
            rows = list(csv.reader(handle))
        if not rows or tuple(rows[0]) != columns:
            problems.append(f"{name} header mismatch")
        elif name == "tournaments.csv" and len(rows) - 1 != config.tournaments:
            problems.append(f"{name} has {len(rows) - 1} rows, expected {config.tournaments}")
    summary = out_dir / "summary.json"
    if not summary.exists():
        problems.append("summary.json missing")
    else:
        try:
            parsed = json.loads(summary.read_text())
        except json.JSONDecodeError:
            problems.append("summary.json unparsable")
        else:
            for key in ("config", "aggregates", "calibration", "timings"):
                if key not in parsed:
                    problems.append(f"summary.json missing {key!r}")
    return problems


def main(argv: Optional[list[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 0

    if args.command == "serve":
        return _cmd_serve(args)

    client = ServiceClient(args.server)
    handlers = {
        "run": _cmd_run,
        "simulate": _cmd_simulate,
        "calibrate": _cmd_calibrate,
        "presets": _cmd_presets,
        "pair": _cmd_pair,
    }
    try:
        return handlers[args.command](args, client)
    except KeyboardInterrupt:
        return RUNTIME_ERROR
    except Exception as exc:  # network failures, unexpected I/O
        print(f"swissgambit: {exc}", file=sys.stderr)
        return RUNTIME_ERROR


if __name__ == "__main__":
    sys.exit(main())
