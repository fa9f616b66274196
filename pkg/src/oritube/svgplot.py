"""Minimal deterministic SVG line/scatter plots.

Byte-for-byte reproducible for identical input: fixed number formatting,
no timestamps, no generated ids.  Used for the analysis plots the CLI
writes next to its CSV output.
"""

from __future__ import annotations

import numpy as np

from .errors import EmptySeries, IoFailure

_W, _H = 640.0, 420.0
_MARGIN = 56.0
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")


def render_plot(series: dict[str, tuple], x_label: str, y_label: str, stream,
                title: str = "") -> int:
    """Render named (x, y) series as polylines with axes, ticks and legend.

    Returns the number of bytes written.
    """
    if not series:
        raise EmptySeries("no series to plot")
    clean = {}
    for name, (xs, ys) in series.items():
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.size == 0 or xs.size != ys.size:
            raise EmptySeries("series %r is empty or ragged" % name)
        clean[name] = (xs, ys)

    all_x = np.concatenate([xs for xs, _ in clean.values()])
    all_y = np.concatenate([ys for _, ys in clean.values()])
    x0, x1 = _expand(float(all_x.min()), float(all_x.max()))
    y0, y1 = _expand(float(all_y.min()), float(all_y.max()))

    def sx(v):
        return _MARGIN + (v - x0) / (x1 - x0) * (_W - 2 * _MARGIN)

    def sy(v):
        return _H - _MARGIN - (v - y0) / (y1 - y0) * (_H - 2 * _MARGIN)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>\n',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        'width="%s" height="%s" viewBox="0 0 %s %s">\n' % (_f(_W), _f(_H), _f(_W), _f(_H)),
        '<rect width="%s" height="%s" fill="white"/>\n' % (_f(_W), _f(_H)),
    ]
    # axes box and ticks
    parts.append(
        '<rect x="%s" y="%s" width="%s" height="%s" fill="none" stroke="#404040"/>\n'
        % (_f(_MARGIN), _f(_MARGIN), _f(_W - 2 * _MARGIN), _f(_H - 2 * _MARGIN))
    )
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        xv = x0 + frac * (x1 - x0)
        yv = y0 + frac * (y1 - y0)
        parts.append(
            '<line x1="%s" y1="%s" x2="%s" y2="%s" stroke="#404040"/>\n'
            % (_f(sx(xv)), _f(_H - _MARGIN), _f(sx(xv)), _f(_H - _MARGIN + 5))
        )
        parts.append(
            '<text x="%s" y="%s" font-size="11" text-anchor="middle">%s</text>\n'
            % (_f(sx(xv)), _f(_H - _MARGIN + 18), _f(xv))
        )
        parts.append(
            '<line x1="%s" y1="%s" x2="%s" y2="%s" stroke="#404040"/>\n'
            % (_f(_MARGIN - 5), _f(sy(yv)), _f(_MARGIN), _f(sy(yv)))
        )
        parts.append(
            '<text x="%s" y="%s" font-size="11" text-anchor="end">%s</text>\n'
            % (_f(_MARGIN - 8), _f(sy(yv) + 4), _f(yv))
        )
    parts.append(
        '<text x="%s" y="%s" font-size="13" text-anchor="middle">%s</text>\n'
        % (_f(_W / 2), _f(_H - 12), _esc(x_label))
    )
    parts.append(
        '<text x="14" y="%s" font-size="13" text-anchor="middle" '
        'transform="rotate(-90 14 %s)">%s</text>\n'
        % (_f(_H / 2), _f(_H / 2), _esc(y_label))
    )
    if title:
        parts.append(
            '<text x="%s" y="24" font-size="14" text-anchor="middle">%s</text>\n'
            % (_f(_W / 2), _esc(title))
        )
    for idx, (name, (xs, ys)) in enumerate(clean.items()):
        color = _COLORS[idx % len(_COLORS)]
        pts = " ".join("%s,%s" % (_f(sx(x)), _f(sy(y))) for x, y in zip(xs, ys))
        parts.append(
            '<polyline fill="none" stroke="%s" stroke-width="1.5" points="%s"/>\n'
            % (color, pts)
        )
        parts.append(
            '<text x="%s" y="%s" font-size="12" fill="%s">%s</text>\n'
            % (_f(_W - _MARGIN - 150), _f(_MARGIN + 16 + 15 * idx), color, _esc(name))
        )
    parts.append("</svg>\n")
    data = "".join(parts).encode()
    try:
        stream.write(data)
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    return len(data)


def _expand(lo: float, hi: float) -> tuple[float, float]:
    if lo == hi:
        pad = 1.0 if lo == 0 else abs(lo) * 0.1
        return lo - pad, hi + pad
    pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


def _f(v: float) -> str:
    out = "%.6g" % v
    return "0" if out == "-0" else out


def _esc(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )
