"""Unroll a tube into a 2D crease pattern and export it as SVG.

The tube surface is developable only along vertex lines where the two
adjacent section edges have the same unit x-component; elsewhere the
surface has cone points and must be cut.  The unroller therefore splits
the columns of panels into maximal developable strips, cuts along the
axial line through section vertex 0 (and along every non-developable
vertex line), and lays the strips side by side sharing the base line, so
each cell is congruent to its 3D panel and the base polyline length
equals the section perimeter.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .errors import EmptyMesh, IoFailure, NonUnrollable
from .tube import TubeGeometry

_DEV_TOL = 1e-9


@dataclass(frozen=True)
class PatternCell:
    """One unrolled panel: 2D corners matching the 3D face vertex order."""

    face_id: int
    strip: int
    corners: np.ndarray  # (4, 2) mm


@dataclass(frozen=True)
class PatternLine:
    p: tuple[float, float]
    q: tuple[float, float]
    tag: str   # 'mountain' | 'valley' | 'boundary'
    kind: str  # 'ring' | 'zigzag'


@dataclass(frozen=True)
class CreasePattern2D:
    cells: tuple[PatternCell, ...]
    lines: tuple[PatternLine, ...]

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        pts = np.vstack([c.corners for c in self.cells])
        return (
            float(pts[:, 0].min()),
            float(pts[:, 1].min()),
            float(pts[:, 0].max()),
            float(pts[:, 1].max()),
        )

    @property
    def total_area(self) -> float:
        return float(sum(_quad_area(c.corners) for c in self.cells))

    @property
    def base_polyline_length(self) -> float:
        """Length of the unrolled ring-0 boundary (= section perimeter)."""
        return float(
            sum(
                np.linalg.norm(c.corners[1] - c.corners[0])
                for c in self.cells
                if c.corners[0, 1] == 0.0 and c.corners[1, 1] == 0.0
            )
        )

    def interior_lines(self) -> tuple[PatternLine, ...]:
        return tuple(line for line in self.lines if line.tag != "boundary")


def unroll_crease_pattern(tube: TubeGeometry) -> CreasePattern2D:
    """Cut the tube along axial lines and unroll it isometrically.

    Every cell keeps its panel's edge lengths and corner angle, the
    mountain/valley tags of creases interior to a strip carry over, and
    cut lines become boundary.
    """
    _require_manifold(tube)
    fam = tube.family
    m, stories = fam.n_edges, fam.n_stories
    lengths = np.hypot(fam.u, fam.v)
    ux = fam.u / lengths  # unit x-component per column
    base_x = np.concatenate(([0.0], np.cumsum(lengths)))
    sin_a = math.sin(fam.alpha_rad)
    seg = fam.seg_length

    # maximal runs of columns with equal unit x-component are developable
    strips: list[list[int]] = [[0]]
    for i in range(1, m):
        if abs(ux[i] - ux[i - 1]) <= _DEV_TOL:
            strips[-1].append(i)
        else:
            strips.append([i])

    tags = {}
    for crease in tube.creases:
        tags[(crease.kind, crease.i, crease.j)] = crease.tag

    cells: list[PatternCell] = []
    lines: list[PatternLine] = []
    for s_idx, cols in enumerate(strips):
        lean = seg * sin_a * ux[cols[0]]          # story-0 x-advance
        height = seg * math.sqrt(max(1.0 - (sin_a * ux[cols[0]]) ** 2, 0.0))
        zig = lambda k: (k % 2) * lean

        for i in cols:
            for k in range(stories):
                corners = np.array(
                    [
                        [base_x[i] + zig(k), k * height],
                        [base_x[i + 1] + zig(k), k * height],
                        [base_x[i + 1] + zig(k + 1), (k + 1) * height],
                        [base_x[i] + zig(k + 1), (k + 1) * height],
                    ]
                )
                cells.append(PatternCell(tube.face_id(i, k), s_idx, corners))

        # ring lines: boundary at k = 0 and k = stories, hinges between
        for i in cols:
            for k in range(stories + 1):
                p = (base_x[i] + zig(k), k * height)
                q = (base_x[i + 1] + zig(k), k * height)
                if k in (0, stories):
                    tag = "boundary"
                else:
                    tag = tags[("ring", tube.vertex_id(i, k), _ring_j(tube, i, k))]
                lines.append(PatternLine(p, q, tag, "ring"))
        # zigzag lines: strip borders are cuts, inner column joints are hinges
        for pos, i in enumerate(cols + [cols[-1] + 1]):
            xb = base_x[i]
            interior = 0 < pos < len(cols)
            for k in range(stories):
                p = (xb + zig(k), k * height)
                q = (xb + zig(k + 1), (k + 1) * height)
                if interior:
                    tag = tags[("zigzag", tube.vertex_id(i % m, k),
                                tube.vertex_id(i % m, k + 1))]
                else:
                    tag = "boundary"
                lines.append(PatternLine(p, q, tag, "zigzag"))

    return CreasePattern2D(tuple(cells), tuple(lines))


def export_svg_pattern(pattern: CreasePattern2D, stream) -> int:
    """SVG 1.1 rendering: solid mountain, dashed valley, boundary outline.

    Document units are mm; the viewBox is the pattern bounding box.
    Returns the byte count written.
    """
    if not pattern.cells:
        raise EmptyMesh("pattern has no cells")
    x0, y0, x1, y1 = pattern.bbox
    w, h = x1 - x0, y1 - y0
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>\n',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        'width="%smm" height="%smm" viewBox="%s %s %s %s">\n'
        % tuple(_fmt(val) for val in (w, h, x0, y0, w, h)),
        "<style>\n"
        ".mountain { stroke: #c02020; stroke-width: 0.25; }\n"
        ".valley { stroke: #2040c0; stroke-width: 0.25; stroke-dasharray: 1.5,1; }\n"
        ".boundary { stroke: #202020; stroke-width: 0.35; }\n"
        "line { fill: none; stroke-linecap: round; }\n"
        "</style>\n",
    ]
    for line in pattern.lines:
        parts.append(
            '<line class="%s" x1="%s" y1="%s" x2="%s" y2="%s"/>\n'
            % (line.tag, _fmt(line.p[0]), _fmt(line.p[1]), _fmt(line.q[0]), _fmt(line.q[1]))
        )
    parts.append("</svg>\n")
    data = "".join(parts).encode()
    try:
        stream.write(data)
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    return len(data)


def _ring_j(tube: TubeGeometry, i: int, k: int) -> int:
    m = tube.n_section_edges
    return k * m + (i + 1) % m


def _require_manifold(tube: TubeGeometry) -> None:
    counts: dict[tuple[int, int], int] = defaultdict(int)
    for face in tube.faces:
        n = len(face)
        for idx in range(n):
            a, b = face[idx], face[(idx + 1) % n]
            counts[(min(a, b), max(a, b))] += 1
    if any(c > 2 for c in counts.values()):
        raise NonUnrollable("mesh has edges shared by more than two faces")


def _quad_area(corners: np.ndarray) -> float:
    x, y = corners[:, 0], corners[:, 1]
    return abs(0.5 * (np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def _fmt(value: float) -> str:
    out = "%.6g" % value
    return "0" if out == "-0" else out
