"""
Minimal SVG writer for curve families.

Each figure is a row of square panels; a panel maps a rectangle of the
complex plane onto pixels with y pointing up. Coordinates are printed with a
fixed precision so identical curves give identical files.
"""

import logging
import os
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

PANEL_SIZE = 480
MARGIN = 20
STYLE = (
    ".frame{fill:none;stroke:#999;stroke-width:0.8}"
    ".circle{fill:none;stroke:#1f77b4;stroke-width:0.7}"
    ".ray{fill:none;stroke:#d62728;stroke-width:0.7}"
    ".grid{fill:none;stroke:#555;stroke-width:0.4}"
    ".graph{fill:none;stroke:#2ca02c;stroke-width:0.9}"
    "text{font-family:sans-serif;font-size:12px}"
)


class SvgPolyline:
    def __init__(self, css_class: str):
        self.css_class = css_class
        self.points: List[Tuple[float, float]] = []

    def add_point(self, x: float, y: float):
        self.points.append((x, y))

    def write(self, output: List[str]):
        if len(self.points) < 2:
            return
        coords = " ".join(f"{x:.3f},{y:.3f}" for x, y in self.points)
        output.append(f'<polyline class="{self.css_class}" points="{coords}"/>')


@dataclass
class Panel:
    """A square view of the rectangle [x0, x1] × [y0, y1]"""

    title: str
    bounds: Tuple[float, float, float, float] = (-1.05, 1.05, -1.05, 1.05)
    unit_circle: bool = True
    polylines: List[SvgPolyline] = field(default_factory=list)

    def to_pixels(self, w: np.ndarray, offset: float) -> np.ndarray:
        x0, x1, y0, y1 = self.bounds
        span = PANEL_SIZE - 2 * MARGIN
        px = offset + MARGIN + (w.real - x0) / (x1 - x0) * span
        py = MARGIN + (y1 - w.imag) / (y1 - y0) * span
        return np.stack([px, py], axis=-1)

    def add_curve(self, w: Sequence[complex], css_class: str):
        line = SvgPolyline(css_class)
        for px, py in self.to_pixels(np.asarray(w, dtype=complex), 0.0):
            line.add_point(float(px), float(py))
        self.polylines.append(line)


class SvgFigure:
    def __init__(self, panels: Sequence[Panel]):
        self.panels = list(panels)

    def render(self) -> str:
        width = PANEL_SIZE * len(self.panels)
        output = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{PANEL_SIZE + MARGIN}" '
            f'viewBox="0 0 {width} {PANEL_SIZE + MARGIN}">',
            f"<style>{STYLE}</style>",
        ]
        for index, panel in enumerate(self.panels):
            offset = index * PANEL_SIZE
            output.append(f'<g transform="translate({offset},0)">')
            output.append(f'<text x="{MARGIN}" y="{PANEL_SIZE + MARGIN / 2:.0f}">{panel.title}</text>')
            if panel.unit_circle:
                center = panel.to_pixels(np.array([0j]), 0.0)[0]
                edge = panel.to_pixels(np.array([1 + 0j]), 0.0)[0]
                output.append(f'<circle class="frame" cx="{center[0]:.3f}" cy="{center[1]:.3f}" '
                              f'r="{edge[0] - center[0]:.3f}"/>')
            for line in panel.polylines:
                line.write(output)
            output.append("</g>")
        output.append("</svg>")
        return "\n".join(output) + "\n"

    def write(self, path: str) -> str:
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        with open(path, "w") as f:
            f.write(self.render())
        logger.info(f"Wrote SVG with {sum(len(p.polylines) for p in self.panels)} polylines to {path}")
        return path
