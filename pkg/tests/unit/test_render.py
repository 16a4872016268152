"""
Unit tests for the SVG writer
"""

import numpy as np
import pytest

from hqdisk.render import MARGIN, PANEL_SIZE, Panel, SvgFigure, SvgPolyline


class TestSvgPolyline:
    def test_write_points(self):
        line = SvgPolyline("ray")
        line.add_point(1.0, 2.0)
        line.add_point(3.25, 4.5)
        output = []
        line.write(output)

        assert output == ['<polyline class="ray" points="1.000,2.000 3.250,4.500"/>']

    def test_single_point_is_skipped(self):
        line = SvgPolyline("ray")
        line.add_point(0.0, 0.0)
        output = []
        line.write(output)

        assert output == []


class TestPanel:
    def test_unit_disk_corners(self):
        panel = Panel("disk")
        pixels = panel.to_pixels(np.array([0j, 1.05 + 1.05j, -1.05 - 1.05j]), 0.0)

        center = MARGIN + (PANEL_SIZE - 2 * MARGIN) / 2.0
        np.testing.assert_allclose(pixels[0], [center, center])
        # y axis points up
        np.testing.assert_allclose(pixels[1], [PANEL_SIZE - MARGIN, MARGIN])
        np.testing.assert_allclose(pixels[2], [MARGIN, PANEL_SIZE - MARGIN])

    def test_add_curve(self):
        panel = Panel("disk")
        panel.add_curve(0.5 * np.exp(1j * np.linspace(0.0, 2.0 * np.pi, 9)), "circle")

        assert len(panel.polylines) == 1
        assert len(panel.polylines[0].points) == 9


class TestSvgFigure:
    @pytest.fixture
    def figure(self):
        first = Panel("preimage")
        first.add_curve([0j, 0.5 + 0.5j], "ray")
        second = Panel("graph", bounds=(0.0, 1.0, 0.0, 1.0), unit_circle=False)
        second.add_curve([0j, 1 + 1j], "graph")
        return SvgFigure([first, second])

    def test_render(self, figure):
        svg = figure.render()

        assert svg.startswith('<?xml version="1.0" encoding="UTF-8"?>')
        assert f'width="{2 * PANEL_SIZE}"' in svg
        assert svg.count("<polyline") == 2
        assert svg.count("<circle") == 1
        assert svg.count(f'translate({PANEL_SIZE},0)') == 1
        assert svg.rstrip().endswith("</svg>")

    def test_render_is_deterministic(self, figure):
        assert figure.render() == figure.render()

    def test_write_creates_directory(self, figure, tmp_path):
        path = tmp_path / "figures" / "demo.svg"
        assert figure.write(str(path)) == str(path)
        assert path.read_text() == figure.render()
