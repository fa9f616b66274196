import io

import numpy as np
import pytest

from oritube.errors import EmptySeries
from oritube.svgplot import render_plot


def test_two_point_series_single_polyline():
    buf = io.BytesIO()
    n = render_plot({"demo": ([0.0, 1.0], [0.0, 2.0])}, "x", "y", buf)
    text = buf.getvalue().decode()
    assert n == len(buf.getvalue())
    assert text.count("<polyline") == 1
    points = text.split('points="')[1].split('"')[0]
    assert len(points.split()) == 2  # two coordinate pairs


def test_deterministic_output():
    series = {"a": (np.linspace(0, 5, 20), np.sin(np.linspace(0, 5, 20)))}
    out = []
    for _ in range(2):
        buf = io.BytesIO()
        render_plot(series, "t", "v", buf, title="demo")
        out.append(buf.getvalue())
    assert out[0] == out[1]


def test_empty_series_rejected():
    with pytest.raises(EmptySeries):
        render_plot({}, "x", "y", io.BytesIO())
    with pytest.raises(EmptySeries):
        render_plot({"bad": ([], [])}, "x", "y", io.BytesIO())


def test_axis_range_covers_data():
    # the 0..42 N force trace must fit inside the drawn axis range
    ys = np.array([0.0, 10.0, 42.0, 30.0])
    buf = io.BytesIO()
    render_plot({"force": (np.arange(4.0), ys)}, "t", "N", buf)
    text = buf.getvalue().decode()
    labels = [
        float(seg.split("</text>")[0])
        for seg in text.split('text-anchor="end">')[1:]
    ]
    assert min(labels) <= 0.0
    assert max(labels) >= 42.0


def test_multiple_series_polylines_and_legend():
    series = {
        "one": ([0, 1, 2], [0, 1, 0]),
        "two": ([0, 1, 2], [1, 0, 1]),
    }
    buf = io.BytesIO()
    render_plot(series, "x", "y", buf)
    text = buf.getvalue().decode()
    assert text.count("<polyline") == 2
    assert ">one</text>" in text
    assert ">two</text>" in text
