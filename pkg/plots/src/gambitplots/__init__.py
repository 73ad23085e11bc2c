"""Violin and boxen figures from campaign CSV files."""

from .render import NoDataError, PlotSpec, RenderResult, SchemaError, render

__version__ = "0.1.0"

__all__ = [
    "NoDataError",
    "PlotSpec",
    "RenderResult",
    "SchemaError",
    "render",
    "__version__",
]
