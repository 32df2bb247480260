"""Line charts for sweep grids, emitted as standalone SVG 1.1 text.

Two orientations: "c_vs_r" plots R against C with one polyline per N, and
"n_vs_r" plots R against N with one polyline per C.  Output is plain text
built through ElementTree, fully deterministic for a given grid, so chart
files can live under version control and be diffed.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .errors import EmptyGrid
from .rulecalc import SweepGrid

WIDTH = 840
HEIGHT = 520
MARGIN_LEFT = 80
MARGIN_RIGHT = 170
MARGIN_TOP = 40
MARGIN_BOTTOM = 60

PALETTE = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
]

AXIS_MODES = ("c_vs_r", "n_vs_r")


def emit_plot_svg(grid: SweepGrid, axis: str = "n_vs_r") -> str:
    """Render the grid as an SVG line chart in the requested orientation."""
    if axis not in AXIS_MODES:
        raise ValueError(f"axis must be one of {AXIS_MODES}, got {axis!r}")
    if not grid.rows:
        raise EmptyGrid("sweep grid has no rows")

    if axis == "c_vs_r":
        x_values = grid.c_values
        x_label = "parents linked by a prerequisite (C)"
        series = [
            (f"N={n}", [(c, _lookup(grid, c, n)) for c in x_values])
            for n in grid.n_values
        ]
    else:
        x_values = grid.n_values
        x_label = "leaves per parent (N)"
        series = [
            (f"C={c}", [(n, _lookup(grid, c, n)) for n in x_values])
            for c in grid.c_values
        ]

    r_values = [row.rules for row in grid.rows]
    r_min, r_max = min(r_values), max(r_values)

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    x_min, x_max = x_values[0], x_values[-1]

    def map_x(value: float) -> float:
        if x_max == x_min:
            return MARGIN_LEFT + plot_w / 2
        return MARGIN_LEFT + (value - x_min) / (x_max - x_min) * plot_w

    def map_y(value: float) -> float:
        # SVG y grows downward; larger R must sit higher on the canvas.
        if r_max == r_min:
            return MARGIN_TOP + plot_h / 2
        return MARGIN_TOP + (1 - (value - r_min) / (r_max - r_min)) * plot_h

    svg = ET.Element(
        "svg",
        {
            "xmlns": "http://www.w3.org/2000/svg",
            "version": "1.1",
            "width": str(WIDTH),
            "height": str(HEIGHT),
            "viewBox": f"0 0 {WIDTH} {HEIGHT}",
        },
    )
    ET.SubElement(svg, "rect", {
        "x": "0", "y": "0", "width": str(WIDTH), "height": str(HEIGHT),
        "fill": "white",
    })

    # axes
    axis_style = {"stroke": "#333333", "stroke-width": "1"}
    ET.SubElement(svg, "line", {
        "x1": _fmt(MARGIN_LEFT), "y1": _fmt(MARGIN_TOP),
        "x2": _fmt(MARGIN_LEFT), "y2": _fmt(HEIGHT - MARGIN_BOTTOM),
        **axis_style,
    })
    ET.SubElement(svg, "line", {
        "x1": _fmt(MARGIN_LEFT), "y1": _fmt(HEIGHT - MARGIN_BOTTOM),
        "x2": _fmt(WIDTH - MARGIN_RIGHT), "y2": _fmt(HEIGHT - MARGIN_BOTTOM),
        **axis_style,
    })

    # axis labels and extremes
    _text(svg, WIDTH - MARGIN_RIGHT, HEIGHT - MARGIN_BOTTOM + 36, x_label,
          anchor="end")
    _text(svg, MARGIN_LEFT - 56, MARGIN_TOP - 14, "rules (R)")
    _text(svg, MARGIN_LEFT - 8, HEIGHT - MARGIN_BOTTOM + 4, str(r_min),
          anchor="end")
    _text(svg, MARGIN_LEFT - 8, MARGIN_TOP + 4, str(r_max), anchor="end")
    for value in x_values:
        _text(svg, map_x(value), HEIGHT - MARGIN_BOTTOM + 18, str(value),
              anchor="middle")

    # one polyline per series, tagged for tooling
    for index, (label, points) in enumerate(series):
        color = PALETTE[index % len(PALETTE)]
        coords = " ".join(
            f"{_fmt(map_x(x))},{_fmt(map_y(y))}" for x, y in points
        )
        ET.SubElement(svg, "polyline", {
            "points": coords,
            "fill": "none",
            "stroke": color,
            "stroke-width": "2",
            "data-series": label,
        })

    # legend block on the right margin
    legend_x = WIDTH - MARGIN_RIGHT + 16
    for index, (label, _) in enumerate(series):
        y = MARGIN_TOP + 10 + index * 20
        color = PALETTE[index % len(PALETTE)]
        ET.SubElement(svg, "line", {
            "x1": _fmt(legend_x), "y1": _fmt(y),
            "x2": _fmt(legend_x + 24), "y2": _fmt(y),
            "stroke": color, "stroke-width": "2",
        })
        _text(svg, legend_x + 30, y + 4, label)

    return ET.tostring(svg, encoding="unicode")


def _lookup(grid: SweepGrid, c: int, n: int) -> int:
    for row in grid.rows:
        if row.parent_steps == c and row.leaves_per_parent == n:
            return row.rules
    raise EmptyGrid(f"grid has no row for C={c}, N={n}")


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _text(svg: ET.Element, x: float, y: float, content: str,
          anchor: str = "start") -> None:
    el = ET.SubElement(svg, "text", {
        "x": _fmt(x), "y": _fmt(y),
        "font-family": "sans-serif", "font-size": "13",
        "text-anchor": anchor, "fill": "#333333",
    })
    el.text = content
