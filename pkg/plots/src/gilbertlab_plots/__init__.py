"""Figures for gilbertlab outputs, consumed through their documented formats."""

from .figures import FIGURE_KINDS, FigureSpec, render
from .schemas import (
    CURVE_COLUMNS,
    PROFILE_COLUMNS,
    SWEEP_COLUMNS,
    SchemaError,
    read_critical,
    read_curves,
    read_gap_report,
    read_profile,
    read_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "FIGURE_KINDS",
    "FigureSpec",
    "render",
    "SchemaError",
    "SWEEP_COLUMNS",
    "CURVE_COLUMNS",
    "PROFILE_COLUMNS",
    "read_sweep",
    "read_curves",
    "read_profile",
    "read_gap_report",
    "read_critical",
    "__version__",
]
