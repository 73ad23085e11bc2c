"""Render distribution figures from campaign CSV files.

Two presentation formats are supported, both grouping one numeric metric
column by one category column (typically ``rounds`` or ``range_size``):

* ``violin`` -- kernel density estimate per group, quartiles drawn as
  dashed lines inside each violin.
* ``boxen`` -- letter-value plot per group, quantile boxes with no
  smoothing.

The KDE bandwidth is pinned to Scott's rule so that rendering the same
CSV twice produces the same figure.  Groups whose metric cells are all
empty are skipped with a warning; missing columns raise SchemaError.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import pandas as pd
import seaborn as sns

KINDS = ("violin", "boxen")

FILL_COLOR = "#7fa8c9"


class SchemaError(Exception):
    """A requested column is not present in the CSV header."""


class NoDataError(Exception):
    """The CSV has no rows with a usable metric value."""


@dataclass(frozen=True)
class PlotSpec:
    """One figure: ``metric`` distributions grouped by ``by``."""

    input_csv: Path
    metric: str
    by: str
    kind: str
    out: Path

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        object.__setattr__(self, "input_csv", Path(self.input_csv))
        object.__setattr__(self, "out", Path(self.out))


@dataclass(frozen=True)
class RenderResult:
    out_path: Path
    groups: tuple
    n_rows: int


def load_frame(spec: PlotSpec) -> pd.DataFrame:
    """Read the CSV and return a two-column frame ready to plot.

    The metric column is coerced to numeric (harness CSVs leave cells
    blank where a value does not apply, e.g. the mean rank difference of
    a tournament without any gambit possibility).  Rows without a usable
    metric are dropped; groups that lose all their rows are reported
    with a warning.
    """
    try:
        raw = pd.read_csv(spec.input_csv)
    except pd.errors.EmptyDataError:
        raise NoDataError(f"{spec.input_csv} is empty") from None
    missing = [c for c in (spec.metric, spec.by) if c not in raw.columns]
    if missing:
        raise SchemaError(
            f"column(s) {', '.join(repr(c) for c in missing)} not in {spec.input_csv} "
            f"(available: {', '.join(raw.columns)})"
        )
    if raw.empty:
        raise NoDataError(f"{spec.input_csv} has a header but no rows")

    frame = pd.DataFrame(
        {
            spec.by: raw[spec.by],
            spec.metric: pd.to_numeric(raw[spec.metric], errors="coerce"),
        }
    )
    n_blank_group = int(frame[spec.by].isna().sum())
    if n_blank_group:
        warnings.warn(f"dropping {n_blank_group} row(s) with an empty {spec.by!r} cell")
        frame = frame.dropna(subset=[spec.by])
    before = set(frame[spec.by].unique())
    frame = frame.dropna(subset=[spec.metric])
    for group in sorted(before - set(frame[spec.by].unique()), key=str):
        warnings.warn(f"group {group!r} has no usable {spec.metric!r} values; skipped")
    if frame.empty:
        raise NoDataError(f"no numeric {spec.metric!r} values in {spec.input_csv}")
    return frame


def group_order(frame: pd.DataFrame, by: str) -> list:
    """Distinct group values, sorted numerically when possible."""
    values = frame[by].unique()
    try:
        ordered = sorted(values)
    except TypeError:
        ordered = sorted(values, key=str)
    return [v.item() if hasattr(v, "item") else v for v in ordered]


def render(spec: PlotSpec) -> RenderResult:
    frame = load_frame(spec)
    order = group_order(frame, spec.by)

    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    if spec.kind == "violin":
        sns.violinplot(
            data=frame,
            x=spec.by,
            y=spec.metric,
            order=order,
            inner="quart",
            bw_method="scott",
            color=FILL_COLOR,
            ax=ax,
        )
    else:
        sns.boxenplot(
            data=frame,
            x=spec.by,
            y=spec.metric,
            order=order,
            color=FILL_COLOR,
            ax=ax,
        )
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    spec.out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.out, dpi=150)
    plt.close(fig)
    return RenderResult(out_path=spec.out, groups=tuple(order), n_rows=len(frame))
