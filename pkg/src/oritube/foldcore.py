"""Closed-form rigid-folding family for translation-swept origami tubes.

The tube is a stack of rings, each a translate of one planar polygon,
connected by parallelogram panels whose second side alternates between
two zigzag vectors d1 = (delta, 0, rho) and d2 = (-delta, 0, rho).
Because every panel is a rigid parallelogram, a folded configuration is
fixed by

  * the ring polygon edge components (p_i, q_i) in the ring plane, and
  * the zigzag components (delta, rho).

Writing the deployed section edges as (u_i, v_i) and the panel-rigidity
constraints out, the whole one-parameter family is

    p_i   = lam * u_i
    q_i   = sigma_i * sqrt(v_i^2 + (1 - lam^2) * u_i^2)
    delta = L * sin(alpha) / lam
    rho   = sqrt(L^2 - delta^2)

with a scalar fold coordinate lam in [sin(alpha), lam_star] and per-edge
signs sigma_i.  Ring closure for every lam is exactly the admissibility
condition (equal forward/backward length per slope group).  At
lam = sin(alpha) the zigzag is flat (rho = 0, the tube collapses into the
ring plane).  At lam_star = min_i |e_i| / |u_i| the slope groups that
attain the minimum flatten (q -> 0) and the motion passes through the
branch point with those groups' signs flipped, unless every group
flattens there (then that end is the second, fully squashed, flat state).

The public fold parameter t in [0, 1] normalizes the fold angle at a
reference crease (a ring crease of a flattening group) linearly between
its two flat-state values, which makes the configuration a smooth and,
for symmetric tubes, exactly t <-> 1-t symmetric function of t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotOneDof
from .section import CrossSection, check_admissible

_FLATTEN_TOL = 1e-9


@dataclass(frozen=True)
class FoldFamily:
    """Precomputed data for the one-DOF fold path of a tube."""

    u: np.ndarray           # deployed edge x components (m,)
    v: np.ndarray           # deployed edge y components (m,)
    alpha_rad: float
    seg_length: float       # zigzag segment length L (mm)
    n_stories: int          # number of zigzag segments S (= 2 * n_units)
    lam_min: float          # sin(alpha): axially flat
    lam_star: float         # fold coordinate where the first group flattens
    flip_mask: np.ndarray   # edges whose q-sign flips past the branch point
    pass_through: bool      # True: path continues through lam_star and back
    drive_edge: int         # reference edge for the fold-angle parameter

    @property
    def n_edges(self) -> int:
        return self.u.shape[0]

    @property
    def n_rings(self) -> int:
        return self.n_stories + 1


def build_family(section: CrossSection, alpha_deg: float, unit_length: float,
                 n_units: int) -> FoldFamily:
    """Validate the section and precompute the fold path data."""
    report = check_admissible(section)
    if not report.admissible:
        raise NotOneDof(
            "section is not admissible; no rigid folding path exists:\n"
            + report.describe()
        )
    verts = section.vertices
    if _signed_area(verts) < 0:  # normalize to CCW so face normals point out
        verts = verts[::-1].copy()
    e = np.roll(verts, -1, axis=0) - verts
    u = e[:, 0].copy()
    v = e[:, 1].copy()
    lengths = np.hypot(u, v)

    with np.errstate(divide="ignore"):
        lam_flat = np.where(np.abs(u) > 0, lengths / np.maximum(np.abs(u), 1e-300), np.inf)
    lam_star = float(lam_flat.min())
    flip_mask = lam_flat <= lam_star * (1 + _FLATTEN_TOL)
    pass_through = not bool(flip_mask.all())
    drive_edge = int(np.argmax(flip_mask))  # lowest flattening edge index

    return FoldFamily(
        u=u,
        v=v,
        alpha_rad=math.radians(alpha_deg),
        seg_length=float(unit_length),
        n_stories=2 * n_units,
        lam_min=math.sin(math.radians(alpha_deg)),
        lam_star=lam_star,
        flip_mask=flip_mask,
        pass_through=pass_through,
        drive_edge=drive_edge,
    )


def fold_angle_of_t(fam: FoldFamily, t: float) -> float:
    """Signed fold angle at the reference crease for fold parameter t.

    Pass-through paths run from +pi (t=0) through 0 (branch point, t=0.5)
    to -pi (t=1); paths ending in the squashed flat state run +pi -> 0.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("fold parameter t must lie in [0, 1]")
    if fam.pass_through:
        return math.pi * (1.0 - 2.0 * t)
    return math.pi * (1.0 - t)


def lambda_of_t(fam: FoldFamily, t: float) -> tuple[float, int]:
    """Map t to (lam, branch_sign); inverts the fold-angle normalization."""
    phi = fold_angle_of_t(fam, t)
    branch = 1 if phi >= 0.0 else -1
    a = abs(phi)
    if a >= math.pi - 1e-15:
        return fam.lam_min, branch
    if a <= 1e-15:
        return fam.lam_star, branch
    x = math.tan(a / 2.0) ** 2
    ue = fam.u[fam.drive_edge]
    ee = fam.u[fam.drive_edge] ** 2 + fam.v[fam.drive_edge] ** 2
    s2 = math.sin(fam.alpha_rad) ** 2
    lam2 = s2 * ee * (1.0 + x) / (x * ee + ue * ue * s2)
    return math.sqrt(lam2), branch


def t_deployed(fam: FoldFamily) -> float:
    """Fold parameter of the as-generated (lam = 1) configuration."""
    lam = 1.0
    if abs(fam.lam_star - 1.0) < 1e-12:
        return 0.5
    ue = fam.u[fam.drive_edge]
    ve = fam.v[fam.drive_edge]
    ee = ue * ue + ve * ve
    s2 = math.sin(fam.alpha_rad) ** 2
    q2 = ve * ve + (1.0 - lam * lam) * ue * ue
    x = q2 * s2 / ((lam * lam - s2) * ee)
    phi = math.acos((1.0 - x) / (1.0 + x))
    if fam.pass_through:
        return (math.pi - phi) / (2.0 * math.pi)
    return (math.pi - phi) / math.pi


def ring_polygon(fam: FoldFamily, t: float) -> np.ndarray:
    """Ring polygon vertex coordinates (m, 2) at fold parameter t."""
    p, q = _edge_components(fam, t)
    px = np.concatenate(([0.0], np.cumsum(p)[:-1]))
    py = np.concatenate(([0.0], np.cumsum(q)[:-1]))
    return np.column_stack([px, py])


def zigzag(fam: FoldFamily, t: float) -> tuple[float, float]:
    """In-plane and axial zigzag components (delta, rho) at t."""
    lam, _ = lambda_of_t(fam, t)
    ls = fam.seg_length * math.sin(fam.alpha_rad)
    if abs(lam - fam.lam_min) < 1e-15:
        return fam.seg_length, 0.0
    delta = ls / lam
    rho = math.sqrt(max(fam.seg_length ** 2 - delta ** 2, 0.0))
    return delta, rho


def vertices_at(fam: FoldFamily, t: float) -> np.ndarray:
    """All tube vertex positions at fold parameter t, shape (m*(S+1), 3).

    Vertex (i, k) = section vertex i on ring k lives at row k*m + i; the
    layout matches the deployed tube so configurations at different t are
    directly comparable without any rigid-motion alignment.
    """
    m = fam.n_edges
    ring2d = ring_polygon(fam, t)
    delta, rho = zigzag(fam, t)
    ks = np.arange(fam.n_rings)
    offx = (ks % 2) * delta
    offz = ks * rho
    verts = np.empty((fam.n_rings * m, 3))
    for k in range(fam.n_rings):
        rows = slice(k * m, (k + 1) * m)
        verts[rows, 0] = ring2d[:, 0] + offx[k]
        verts[rows, 1] = ring2d[:, 1]
        verts[rows, 2] = offz[k]
    return verts


def _edge_components(fam: FoldFamily, t: float) -> tuple[np.ndarray, np.ndarray]:
    lam, branch = lambda_of_t(fam, t)
    p = lam * fam.u
    r2 = fam.v ** 2 + (1.0 - lam * lam) * fam.u ** 2
    r = np.sqrt(np.maximum(r2, 0.0))
    if abs(lam - fam.lam_star) < 1e-15:
        r[fam.flip_mask] = 0.0  # exact at the branch point / squashed state
    # forward/backward sign within each slope group; the group balance from
    # admissibility makes sum(sigma_i * r_i) vanish for every lam
    base = np.where(fam.v != 0.0, np.sign(fam.v), np.sign(fam.u))
    sigma = base.copy()
    if fam.pass_through and branch < 0:
        sigma[fam.flip_mask] = -base[fam.flip_mask]
    return p, sigma * r


def _signed_area(verts: np.ndarray) -> float:
    x, y = verts[:, 0], verts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))
