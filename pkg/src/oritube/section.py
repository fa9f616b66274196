"""Planar cross-sections and the edge-group admissibility test.

A cross-section is admissible as the generator of a rigid-foldable tube
when its edges can be collected into groups of equal slope such that, in
every group, the edges traversed "forward" and the edges traversed
"backward" have the same total length.  This is the translational
symmetry condition: it guarantees the polygon stays closed while the
section shears during folding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateAngles, DegeneratePolygon

# Angular tolerance for two edges to count as parallel, and the default
# length tolerance for the group balance test.  Both sit far below any
# fabrication resolution.
SLOPE_TOL_RAD = 1e-9
LENGTH_TOL_MM = 1e-6

_MIN_EDGE_MM = 1e-9


@dataclass(frozen=True)
class CrossSection:
    """Simple closed polygon in the (x, y) plane, coordinates in mm."""

    vertices: np.ndarray  # (n, 2) float64, ordered, not repeated at the end

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise DegeneratePolygon("need an (n, 2) array with n >= 3")
        object.__setattr__(self, "vertices", v)
        lengths = np.linalg.norm(self.edge_vectors(), axis=1)
        if np.any(lengths <= _MIN_EDGE_MM):
            raise DegeneratePolygon("consecutive vertices closer than 1e-9 mm")
        if _self_intersects(v):
            raise DegeneratePolygon("polygon boundary self-intersects")

    @property
    def n_edges(self) -> int:
        return self.vertices.shape[0]

    def edge_vectors(self) -> np.ndarray:
        """Directed edge vectors v[i+1] - v[i], wrapping around."""
        v = self.vertices
        return np.roll(v, -1, axis=0) - v

    def edge_lengths(self) -> np.ndarray:
        return np.linalg.norm(self.edge_vectors(), axis=1)

    def slope_angles(self) -> np.ndarray:
        """Undirected edge slope angles in [0, pi)."""
        e = self.edge_vectors()
        ang = np.arctan2(e[:, 1], e[:, 0]) % math.pi
        # atan2 of an exactly-backward edge can give pi itself
        ang[np.isclose(ang, math.pi, atol=1e-12)] = 0.0
        return ang

    def perimeter(self) -> float:
        return float(self.edge_lengths().sum())

    def scaled(self, factor: float) -> "CrossSection":
        return CrossSection(self.vertices * factor)

    def rotated(self, angle_rad: float) -> "CrossSection":
        c, s = math.cos(angle_rad), math.sin(angle_rad)
        rot = np.array([[c, -s], [s, c]])
        return CrossSection(self.vertices @ rot.T)


@dataclass(frozen=True)
class EdgeGroup:
    """Edges sharing one slope, split by traversal direction."""

    slope_rad: float
    edge_indices: tuple[int, ...]
    forward_length: float
    backward_length: float

    @property
    def balanced(self) -> bool:
        return self.forward_length > 0 and self.backward_length > 0


@dataclass(frozen=True)
class EdgeGroupReport:
    groups: tuple[EdgeGroup, ...]
    admissible: bool
    violations: tuple[str, ...] = field(default=())

    def describe(self) -> str:
        lines = []
        for g in self.groups:
            lines.append(
                "slope %8.3f deg  edges %-12s  forward %.6f mm  backward %.6f mm"
                % (
                    math.degrees(g.slope_rad),
                    ",".join(str(i) for i in g.edge_indices),
                    g.forward_length,
                    g.backward_length,
                )
            )
        lines.append("admissible: %s" % ("yes" if self.admissible else "no"))
        lines.extend("violation: " + v for v in self.violations)
        return "\n".join(lines)


def check_admissible(cs: CrossSection, tol: float = LENGTH_TOL_MM) -> EdgeGroupReport:
    """Group edges by slope and test the per-group length balance.

    Edges whose slopes differ by less than ``SLOPE_TOL_RAD`` (mod pi) form
    one group.  Within a group each edge is classified forward/backward by
    the sign of its projection on the group direction; the section is
    admissible iff every group has both classes present with equal total
    length within ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    e = cs.edge_vectors()
    lengths = cs.edge_lengths()
    angles = cs.slope_angles()

    groups: list[EdgeGroup] = []
    violations: list[str] = []
    assigned = np.full(cs.n_edges, False)
    for i in range(cs.n_edges):
        if assigned[i]:
            continue
        diff = np.abs(angles - angles[i])
        diff = np.minimum(diff, math.pi - diff)  # slopes wrap at pi
        members = np.where(~assigned & (diff <= SLOPE_TOL_RAD))[0]
        assigned[members] = True
        direction = np.array([math.cos(angles[i]), math.sin(angles[i])])
        proj = e[members] @ direction
        fwd = float(lengths[members[proj > 0]].sum())
        bwd = float(lengths[members[proj <= 0]].sum())
        group = EdgeGroup(float(angles[i]), tuple(int(m) for m in members), fwd, bwd)
        groups.append(group)
        if fwd == 0.0 or bwd == 0.0:
            violations.append(
                "slope %.3f deg has edges in only one direction"
                % math.degrees(group.slope_rad)
            )
        elif abs(fwd - bwd) > tol:
            violations.append(
                "slope %.3f deg length mismatch: %.9f vs %.9f mm"
                % (math.degrees(group.slope_rad), fwd, bwd)
            )

    return EdgeGroupReport(tuple(groups), not violations, tuple(violations))


def make_quad_section(a: float, b: float, theta1_deg: float, theta2_deg: float) -> CrossSection:
    """Parallelogram section with edge pairs of lengths a, b at the two slopes.

    The construction walks a*u(theta1), b*u(theta2), -a*u(theta1),
    -b*u(theta2), so the result is admissible by design.
    """
    if a <= 0 or b <= 0:
        raise DegeneratePolygon("side lengths must be positive")
    t1 = math.radians(theta1_deg)
    t2 = math.radians(theta2_deg)
    if abs(math.sin(t1 - t2)) < 1e-12:
        raise DegenerateAngles(
            "slopes %.6f and %.6f deg coincide mod 180" % (theta1_deg, theta2_deg)
        )
    e1 = np.array([math.cos(t1), math.sin(t1)]) * a
    e2 = np.array([math.cos(t2), math.sin(t2)]) * b
    verts = np.array([[0.0, 0.0], e1, e1 + e2, e2])
    return CrossSection(verts)


def _self_intersects(v: np.ndarray) -> bool:
    """Brute-force segment intersection test over non-adjacent edge pairs."""
    n = v.shape[0]
    segs = [(v[i], v[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue  # adjacent edges share an endpoint
            if _segments_cross(*segs[i], *segs[j]):
                return True
    return False


def _segments_cross(p1, p2, q1, q2) -> bool:
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
        return True
    for d, p in ((d1, p1), (d2, p2)):
        if d == 0 and _on_segment(q1, q2, p):
            return True
    for d, q in ((d3, q1), (d4, q2)):
        if d == 0 and _on_segment(p1, p2, q):
            return True
    return False


def _orient(a, b, c) -> float:
    return float((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def _on_segment(a, b, p) -> bool:
    return (
        min(a[0], b[0]) - 1e-12 <= p[0] <= max(a[0], b[0]) + 1e-12
        and min(a[1], b[1]) - 1e-12 <= p[1] <= max(a[1], b[1]) + 1e-12
    )
