"""Rigid-folding states of a tube: configurations, sweeps, volume."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import foldcore
from .errors import NoConvergence, NotOneDof, OpenSurface
from .mesh import close_tube_surface, is_watertight, mesh_volume
from .tube import TubeGeometry

#: rigid-panel residual bound (mm): edge lengths and planarity
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class FoldedState:
    """Tube configuration at fold parameter t in [0, 1].

    t = 0 and t = 1 are the two flat extremes of the one-DOF path; the
    as-generated (deployed) configuration sits at ``deployed_t`` of the
    tube's fold family (0.5 for sections with a flat-slope edge group).
    """

    t: float
    vertices: np.ndarray
    axial_length: float
    transverse_height: float
    enclosed_volume: float
    volume_is_hull_estimate: bool = field(default=False)


def fold_configuration(tube: TubeGeometry, t: float) -> FoldedState:
    """Solve the rigid-origami constraints at fold parameter t.

    For translation-swept tubes of admissible sections the constraint
    manifold has the closed form implemented in :mod:`oritube.foldcore`;
    the configuration is evaluated directly and then verified against the
    rigid-panel residual bound.
    """
    fam = tube.family
    vertices = foldcore.vertices_at(fam, float(t))
    residual = max(_edge_residual(tube, vertices), _planarity_residual(tube, vertices))
    if residual > RESIDUAL_TOL:
        raise NoConvergence(
            "fold state residual %.3e mm exceeds %.1e" % (residual, RESIDUAL_TOL)
        )
    volume, is_hull = _enclosed_volume(tube, vertices)
    extents = vertices.max(axis=0) - vertices.min(axis=0)
    return FoldedState(
        t=float(t),
        vertices=vertices,
        axial_length=float(extents[2]),
        transverse_height=float(extents.min()),
        enclosed_volume=volume,
        volume_is_hull_estimate=is_hull,
    )


def fold_sweep(tube: TubeGeometry, n_steps: int) -> list[FoldedState]:
    """States on the uniform grid t = i/(n_steps-1)."""
    if n_steps < 2:
        raise ValueError("n_steps must be at least 2")
    return [fold_configuration(tube, i / (n_steps - 1)) for i in range(n_steps)]


def enclosed_volume(tube: TubeGeometry, state: FoldedState) -> float:
    """Volume of the capped tube surface via the divergence theorem."""
    volume, _ = _enclosed_volume(tube, state.vertices)
    return volume


def extension_ratio(state: FoldedState, tube: TubeGeometry) -> float:
    """Axial length relative to the deployed length.

    0 at the axially flat extremes and 1 at the deployed configuration;
    fold paths that extend past the deployed state (sections without a
    flat-slope edge group) can exceed 1.
    """
    return state.axial_length / tube.deployed_length


def write_sweep_csv(states: list[FoldedState], stream) -> None:
    """Emit the sweep as CSV: t, axial_length_mm, transverse_height_mm, volume_mm3."""
    stream.write("t,axial_length_mm,transverse_height_mm,volume_mm3\n")
    for s in states:
        stream.write(
            "%.10g,%.10g,%.10g,%.10g\n"
            % (s.t, s.axial_length, s.transverse_height, s.enclosed_volume)
        )


def _enclosed_volume(tube: TubeGeometry, vertices: np.ndarray) -> tuple[float, bool]:
    ring0 = tube.ring_ids(0)
    ring1 = tube.ring_ids(tube.n_stories)
    try:
        verts, tris = close_tube_surface(vertices, tube.faces, ring0, ring1)
    except OpenSurface:
        warnings.warn(
            "end rings cannot be capped; falling back to convex-hull volume",
            RuntimeWarning,
            stacklevel=2,
        )
        return _hull_volume(vertices), True
    assert is_watertight(tris)
    return abs(mesh_volume(verts, tris)), False


def _hull_volume(vertices: np.ndarray) -> float:
    from scipy.spatial import ConvexHull, QhullError

    try:
        return float(ConvexHull(vertices).volume)
    except QhullError:
        return 0.0  # fully flat configuration has no 3D hull


def _edge_residual(tube: TubeGeometry, vertices: np.ndarray) -> float:
    fam = tube.family
    ref_ring = np.hypot(fam.u, fam.v)
    worst = 0.0
    m = fam.n_edges
    for k in range(fam.n_rings):
        ring = vertices[k * m:(k + 1) * m]
        lengths = np.linalg.norm(np.roll(ring, -1, axis=0) - ring, axis=1)
        worst = max(worst, float(np.abs(lengths - ref_ring).max()))
    for k in range(fam.n_stories):
        seg = vertices[(k + 1) * m:(k + 2) * m] - vertices[k * m:(k + 1) * m]
        lengths = np.linalg.norm(seg, axis=1)
        worst = max(worst, float(np.abs(lengths - fam.seg_length).max()))
    return worst


def _planarity_residual(tube: TubeGeometry, vertices: np.ndarray) -> float:
    worst = 0.0
    for face in tube.faces:
        pts = vertices[face]
        n = np.cross(pts[1] - pts[0], pts[2] - pts[0])
        norm = np.linalg.norm(n)
        if norm < 1e-14:  # flat-folded panel: planar by definition
            continue
        worst = max(worst, abs(float(np.dot(pts[3] - pts[0], n / norm))))
    return worst


def assert_one_dof(tube: TubeGeometry) -> None:
    """Raise NotOneDof if the tube's section admits no rigid fold path."""
    if tube.family is None:
        raise NotOneDof("tube carries no fold family")
