"""Plotting pipeline for the simulator's CCDF CSV bundle."""

from .figures import (
    BUNDLE_FIGURES,
    FigureSpec,
    InvalidCsvError,
    RenderResult,
    read_series,
    render_bundle,
    render_ccdf,
)

__version__ = "0.1.0"
