"""Figure rendering for qmc sweep CSVs (dual-axis entropy/COP plots)."""

from .figures import (
    FIGURE_PRESETS,
    FigureSpec,
    RenderResult,
    crossing_interval_indices,
    render,
    sidecar_path_for,
)
from .schema import DataError, SchemaError, SweepPoint, read_manifest, read_sweep_csv

__version__ = "0.1.0"

__all__ = [
    "FIGURE_PRESETS",
    "FigureSpec",
    "RenderResult",
    "DataError",
    "SchemaError",
    "SweepPoint",
    "crossing_interval_indices",
    "read_manifest",
    "read_sweep_csv",
    "render",
    "sidecar_path_for",
    "__version__",
]
