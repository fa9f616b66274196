"""Triangulation, capping, volume and dihedral helpers for tube meshes."""

from __future__ import annotations

import math
from collections import defaultdict

import numpy as np

from .errors import OpenSurface


def triangulate_quads(vertices: np.ndarray, quads: np.ndarray) -> np.ndarray:
    """Split each quad along its shorter diagonal; returns (2F, 3) indices."""
    quads = np.asarray(quads, dtype=int)
    tris = np.empty((2 * quads.shape[0], 3), dtype=int)
    for f, (a, b, c, d) in enumerate(quads):
        diag_ac = np.linalg.norm(vertices[c] - vertices[a])
        diag_bd = np.linalg.norm(vertices[d] - vertices[b])
        if diag_ac <= diag_bd:
            tris[2 * f] = (a, b, c)
            tris[2 * f + 1] = (a, c, d)
        else:
            tris[2 * f] = (a, b, d)
            tris[2 * f + 1] = (b, c, d)
    return tris


def cap_ring(vertices: np.ndarray, loop: np.ndarray, flip: bool) -> tuple[np.ndarray, np.ndarray]:
    """Centroid triangle fan over a ring loop.

    Returns (extra_vertex, fan_triangles) where the fan references the
    extra centroid vertex with index ``len(vertices)``.  ``flip`` reverses
    the winding (used so both caps point outward).
    """
    centroid = vertices[loop].mean(axis=0)
    n = loop.shape[0]
    c_idx = vertices.shape[0]
    tris = []
    for i in range(n):
        a, b = loop[i], loop[(i + 1) % n]
        tris.append((c_idx, b, a) if flip else (c_idx, a, b))
    return centroid, np.array(tris, dtype=int)


def close_tube_surface(vertices: np.ndarray, quads: np.ndarray,
                       ring0: np.ndarray, ring1: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Triangulated closed surface: side panels plus centroid-fan end caps.

    Raises OpenSurface if a ring is not star-shaped around its centroid
    (the fan would self-fold and the cap leaks).
    """
    side = triangulate_quads(vertices, quads)
    for loop in (ring0, ring1):
        if not _star_shaped(vertices, loop):
            raise OpenSurface("end ring is not star-shaped; cannot cap with a fan")
    c0, fan0 = cap_ring(vertices, ring0, flip=True)
    verts = np.vstack([vertices, c0])
    c1, fan1 = cap_ring(verts, ring1, flip=False)
    verts = np.vstack([verts, c1])
    tris = np.vstack([side, fan0, fan1])
    if mesh_volume(verts, tris) < 0:
        tris = tris[:, ::-1]
    return verts, tris


def mesh_volume(vertices: np.ndarray, tris: np.ndarray) -> float:
    """Signed enclosed volume by the divergence theorem (positive = outward)."""
    a = vertices[tris[:, 0]]
    b = vertices[tris[:, 1]]
    c = vertices[tris[:, 2]]
    return float(np.einsum("ij,ij->i", a, np.cross(b, c)).sum() / 6.0)


def is_watertight(tris: np.ndarray) -> bool:
    """True iff every undirected edge is shared by exactly two triangles."""
    counts: dict[tuple[int, int], int] = defaultdict(int)
    for a, b, c in tris:
        for i, j in ((a, b), (b, c), (c, a)):
            counts[(min(i, j), max(i, j))] += 1
    return all(n == 2 for n in counts.values())


def fold_angle(vertices: np.ndarray, face_a: np.ndarray, face_b: np.ndarray,
               edge: tuple[int, int]) -> float:
    """Signed fold angle at the crease between two faces.

    Zero when the faces are coplanar and unfolded; positive when the
    crease is convex with respect to the face normals (mountain for an
    outward-oriented surface); range (-pi, pi].
    """
    n_a = _face_normal(vertices, face_a)
    n_b = _face_normal(vertices, face_b)
    i, j = edge
    e = vertices[j] - vertices[i]
    # orient the hinge axis the way face_a traverses the shared edge
    if not _traverses(face_a, i, j):
        e = -e
    norm = np.linalg.norm(e)
    if norm == 0:
        return 0.0
    e = e / norm
    s = float(np.dot(np.cross(n_a, n_b), e))
    c = float(np.dot(n_a, n_b))
    return math.atan2(s, c)


def _face_normal(vertices: np.ndarray, face: np.ndarray) -> np.ndarray:
    pts = vertices[np.asarray(face)]
    n = np.cross(pts[1] - pts[0], pts[-1] - pts[0])
    ln = np.linalg.norm(n)
    if ln == 0:
        # degenerate (flat-folded) panel: fall back to any stable normal
        return np.array([0.0, 0.0, 1.0])
    return n / ln


def _traverses(face: np.ndarray, i: int, j: int) -> bool:
    face = list(face)
    n = len(face)
    for k in range(n):
        if face[k] == i and face[(k + 1) % n] == j:
            return True
    return False


def _star_shaped(vertices: np.ndarray, loop: np.ndarray) -> bool:
    """Ring is star-shaped around its centroid within its own plane."""
    pts = vertices[loop]
    centroid = pts.mean(axis=0)
    rel = pts - centroid
    normal = np.zeros(3)
    for i in range(len(loop)):
        normal += np.cross(rel[i], rel[(i + 1) % len(loop)])
    norm = np.linalg.norm(normal)
    if norm < 1e-12:  # fully collapsed ring: caps are degenerate but sealed
        return True
    normal /= norm
    signs = []
    for i in range(len(loop)):
        tri_n = np.cross(rel[i], rel[(i + 1) % len(loop)])
        s = np.dot(tri_n, normal)
        if abs(s) > 1e-12:
            signs.append(s > 0)
    return all(signs) or not any(signs)
