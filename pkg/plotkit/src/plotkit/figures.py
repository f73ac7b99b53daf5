"""Dual-axis figure rendering for sweep CSVs.

Left axis: per-cycle entropies (any of sigma, I, S_baths).  Right axis:
the COP in Carnot units (cop_ratio), clipped to keep divergent values
legible.  Intervals where the bath entropy change and (cop_ratio - 1)
change sign together are highlighted; by construction of the cycle these
are the points where the COP meets the Carnot value.

The plotted data are also written to a ``<out>.series.csv`` sidecar, which
is a pure function of the CSV bytes and the figure spec (byte-identical
across runs); only the image rasterisation depends on the backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .schema import DataError, SweepPoint, read_sweep_csv

LEFT_SERIES_CHOICES = ("sigma", "I", "S_baths")
RIGHT_SERIES = "cop_ratio"

_LEFT_STYLES = {
    "sigma": dict(color="black", linestyle="-", label="sigma"),
    "I": dict(color="tab:red", linestyle="--", label="I"),
    "S_baths": dict(color="tab:blue", linestyle="-.", label="S_baths"),
}
_RIGHT_STYLE = dict(color="tab:green", linestyle=(0, (3, 1, 1, 1, 1, 1)), label="cop_ratio")


@dataclass(frozen=True, eq=False)
class FigureSpec:
    input_csv: str
    output_path: str
    left_series: tuple[str, ...] = LEFT_SERIES_CHOICES
    right_series: tuple[str, ...] = (RIGHT_SERIES,)
    crossing_markers: bool = True
    inset_series: tuple[str, ...] = ()   # drawn in an inset over the same axis
    clip: float = 10.0
    x_log: bool = False

    def __post_init__(self):
        for name in self.left_series + self.inset_series:
            if name not in LEFT_SERIES_CHOICES:
                raise ValueError(f"unknown left-axis series {name!r}; "
                                 f"choose from {LEFT_SERIES_CHOICES}")
        for name in self.right_series:
            if name != RIGHT_SERIES:
                raise ValueError(f"right axis supports only {RIGHT_SERIES!r}")
        if not (self.clip > 0.0):
            raise ValueError(f"clip must be positive, got {self.clip!r}")


FIGURE_PRESETS: dict[str, dict[str, object]] = {
    "fig2a": dict(left_series=("sigma", "I", "S_baths"), inset_series=(), x_log=False),
    "fig2b": dict(left_series=("S_baths",), inset_series=("sigma", "I"), x_log=True),
    "custom": dict(left_series=("sigma", "I", "S_baths"), inset_series=(), x_log=False),
}


@dataclass(eq=False)
class RenderResult:
    output_path: str
    sidecar_path: str
    skipped_rows: list[tuple[int, str]]
    crossing_intervals: list[tuple[int, float, float]]
    clipped_points: int = 0


def sidecar_path_for(output_path: str) -> str:
    return output_path + ".series.csv"


def crossing_interval_indices(points: list[SweepPoint]) -> list[int]:
    """Intervals (i, i+1) where S_baths and cop_ratio - 1 flip sign together.

    Mirrors the verifier's rule: both rows must be ok, carry finite values
    and positive work input (the sign coincidence is an identity only for
    driven operation).
    """
    out = []
    for i in range(len(points) - 1):
        a, b = points[i], points[i + 1]
        if not (a.ok and b.ok):
            continue
        vals = (a["W"], b["W"], a["S_baths"], b["S_baths"], a["cop_ratio"], b["cop_ratio"])
        if any(v is None for v in vals):
            continue
        if not (a["W"] > 0.0 and b["W"] > 0.0):
            continue
        if not all(math.isfinite(v) for v in (a["S_baths"], b["S_baths"],
                                              a["cop_ratio"], b["cop_ratio"])):
            continue
        s_flip = a["S_baths"] * b["S_baths"] < 0.0
        r_flip = (a["cop_ratio"] - 1.0) * (b["cop_ratio"] - 1.0) < 0.0
        if s_flip and r_flip:
            out.append(i)
    return out


def _format_cell(x: float | None) -> str:
    if x is None:
        return ""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _clipped_ratio(value: float | None, clip: float) -> tuple[float | None, bool]:
    if value is None:
        return None, False
    if value > clip:
        return clip, True
    if value < -clip:
        return -clip, True
    return value, False


def render(spec: FigureSpec) -> RenderResult:
    """Render the figure and its sidecar; returns what was drawn/skipped."""
    points = read_sweep_csv(spec.input_csv)
    skipped = [(i, p["status"]) for i, p in enumerate(points) if not p.ok]
    usable = [p for p in points if p.ok]
    if len(usable) < 2:
        raise DataError(f"{spec.input_csv}: need at least 2 plottable rows, "
                        f"have {len(usable)}")

    xs = [p["axis_value"] for p in usable]
    axis_name = usable[0]["axis_name"]

    right_plotted: list[float | None] = []
    clipped_count = 0
    for p in usable:
        value, was_clipped = _clipped_ratio(p[RIGHT_SERIES], spec.clip)
        right_plotted.append(value)
        clipped_count += was_clipped

    fig, ax_left = plt.subplots(figsize=(7.0, 4.5))
    ax_right = ax_left.twinx()

    for name in spec.left_series:
        ax_left.plot(xs, [p[name] for p in usable], **_LEFT_STYLES[name])
    ax_left.axhline(0.0, color="gray", linewidth=0.6, alpha=0.6)

    for _ in spec.right_series:
        ax_right.plot(xs, right_plotted, **_RIGHT_STYLE)
        clipped_x = [x for x, p in zip(xs, usable)
                     if _clipped_ratio(p[RIGHT_SERIES], spec.clip)[1]]
        if clipped_x:
            ax_right.plot(clipped_x, [spec.clip] * len(clipped_x), "^",
                          color=_RIGHT_STYLE["color"], markersize=4,
                          label=f"cop_ratio clipped at {spec.clip:g}")
    ax_right.axhline(1.0, color=_RIGHT_STYLE["color"], linewidth=0.6, alpha=0.5)

    crossings: list[tuple[int, float, float]] = []
    if spec.crossing_markers:
        for i in crossing_interval_indices(points):
            x_lo, x_hi = points[i]["axis_value"], points[i + 1]["axis_value"]
            crossings.append((i, x_lo, x_hi))
            ax_left.axvspan(x_lo, x_hi, color="gold", alpha=0.5, zorder=0)

    if spec.inset_series:
        ax_inset = fig.add_axes([0.28, 0.58, 0.28, 0.26])
        for name in spec.inset_series:
            ax_inset.plot(xs, [p[name] for p in usable], **_LEFT_STYLES[name])
        if spec.x_log:
            ax_inset.set_xscale("log")
        ax_inset.tick_params(labelsize=7)
        ax_inset.legend(fontsize=7, frameon=False)

    if spec.x_log:
        ax_left.set_xscale("log")
    ax_left.set_xlabel(axis_name)
    ax_left.set_ylabel("entropy per cycle")
    ax_right.set_ylabel("cop_ratio")
    lines_l, labels_l = ax_left.get_legend_handles_labels()
    lines_r, labels_r = ax_right.get_legend_handles_labels()
    ax_left.legend(lines_l + lines_r, labels_l + labels_r, fontsize=8, frameon=False)
    if not spec.inset_series:  # manual inset axes are incompatible with tight_layout
        fig.tight_layout()
    fig.savefig(spec.output_path, dpi=150)
    plt.close(fig)

    sidecar = sidecar_path_for(spec.output_path)
    series_names = list(spec.left_series) + list(spec.inset_series)
    seen = set()
    series_names = [n for n in series_names if not (n in seen or seen.add(n))]
    with open(sidecar, "w", newline="") as f:
        f.write(",".join(["axis_value", *series_names, RIGHT_SERIES]) + "\n")
        for p, ratio in zip(usable, right_plotted):
            cells = [_format_cell(p["axis_value"])]
            cells += [_format_cell(p[name]) for name in series_names]
            cells.append(_format_cell(ratio))
            f.write(",".join(cells) + "\n")

    return RenderResult(
        output_path=spec.output_path,
        sidecar_path=sidecar,
        skipped_rows=skipped,
        crossing_intervals=crossings,
        clipped_points=clipped_count,
    )
