"""Named experiment presets.

A preset bundles the configuration overrides for one study, possibly
swept over an axis (rounds, strength-range size); resolving it yields
one labelled ExperimentConfig per campaign.  Explicit caller overrides
win over preset values, which win over the built-in defaults.

The sweeps cover the standard experiment grid: rounds {5, 7, 9, 11}
for both models, and strength ranges of size {800, 1200, 1600} centered
at 1800 Elo, with the probabilistic strength sweep played over 11 rounds
because 5-round tournaments barely produce probabilistic gambits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .harness import ExperimentConfig

_STRENGTH_RANGES = ((1400, 2200), (1200, 2400), (1000, 2600))

_DESK_PROB = {
    "model": "probabilistic",
    "heuristic": "p-value",
    "tournaments": 100,
    "sample_size": 50,
}


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    base: dict = field(default_factory=dict)
    sweep: tuple[tuple[str, dict], ...] = ()

    def campaigns(self) -> list[tuple[str, dict]]:
        """(label, field overrides) per campaign; single-campaign presets
        use their own name as the label."""
        if not self.sweep:
            return [(self.name, dict(self.base))]
        return [(label, {**self.base, **overrides}) for label, overrides in self.sweep]


def _rounds_sweep(extra: dict) -> tuple[tuple[str, dict], ...]:
    return tuple((f"rounds-{r}", {**extra, "rounds": r}) for r in (5, 7, 9, 11))


def _strength_sweep(extra: dict) -> tuple[tuple[str, dict], ...]:
    return tuple(
        (f"range-{hi - lo}", {**extra, "strength_range": (lo, hi)})
        for lo, hi in _STRENGTH_RANGES
    )


PRESETS: dict[str, Preset] = {
    preset.name: preset
    for preset in (
        Preset(
            "default",
            "full scale: 1000 deterministic tournaments, 32 players, 5 rounds",
        ),
        Preset(
            "smoke",
            "seconds-long sanity run: 10 deterministic tournaments of 16 players",
            {"tournaments": 10, "players": 16},
        ),
        Preset(
            "desk-det",
            "deterministic model at desk scale: 200 tournaments",
            {"tournaments": 200},
        ),
        Preset(
            "desk-prob",
            "probabilistic model at desk scale: 100 tournaments, sample size 50",
            dict(_DESK_PROB),
        ),
        Preset(
            "rounds-sweep-det",
            "deterministic campaigns at rounds 5, 7, 9 and 11",
            sweep=_rounds_sweep({"tournaments": 200}),
        ),
        Preset(
            "rounds-sweep-prob",
            "probabilistic campaigns at rounds 5, 7, 9 and 11",
            sweep=_rounds_sweep(dict(_DESK_PROB)),
        ),
        Preset(
            "strength-sweep-det",
            "deterministic campaigns over strength ranges of size 800, 1200 and 1600",
            sweep=_strength_sweep({"tournaments": 200}),
        ),
        Preset(
            "strength-sweep-prob",
            "probabilistic campaigns over the same strength ranges, 11 rounds",
            sweep=_strength_sweep({**_DESK_PROB, "rounds": 11}),
        ),
    )
}


def resolve(name: str, overrides: Optional[dict] = None) -> list[tuple[str, ExperimentConfig]]:
    """Expand a preset into validated (label, config) campaigns.

    Raises KeyError for an unknown preset name and ValueError when the
    merged configuration violates an invariant.
    """
    preset = PRESETS[name]
    resolved = []
    for label, fields in preset.campaigns():
        merged = {**fields, **(overrides or {})}
        config = ExperimentConfig(**merged)
        config.validate(for_scan=True)
        resolved.append((label, config))
    return resolved
