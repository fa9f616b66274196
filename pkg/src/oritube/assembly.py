"""Bi-directional actuator assembly: orthogonal tube families merged.

Stage 1 places ``n_vertical`` vertical tubes (axes along z) side by side
at the section pitch so their facing corner vertex lines coincide
(edge-to-edge join).  Stage 2 sandwiches the row between horizontal
tubes (axes along x) placed alternately above and below, each anchored
corner-on-corner against the row.  Stage 3 tiles that unit cell by the
(nx, ny, nz) pattern.  Coincident vertices across tube interfaces are
welded; every face carries the channel label of its tube family.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpec, InterfaceMismatch
from .tube import Crease, TubeGeometry, TubeSpec, generate_tube

MERGE_TOL_MM = 1e-6

CHANNEL_VERTICAL = "direction-1"
CHANNEL_HORIZONTAL = "direction-2"


@dataclass(frozen=True)
class AssemblySpec:
    tube: TubeSpec
    n_vertical: int = 1
    n_horizontal: int = 0
    pattern: tuple[int, int, int] = (1, 1, 1)

    def __post_init__(self):
        if self.n_vertical < 1:
            raise DegenerateSpec("n_vertical must be at least 1")
        if self.n_horizontal < 0:
            raise DegenerateSpec("n_horizontal cannot be negative")
        if any(n < 1 for n in self.pattern):
            raise DegenerateSpec("pattern repetitions must be at least 1")


@dataclass(frozen=True)
class AssemblyGeometry:
    vertices: np.ndarray            # welded (N, 3)
    faces: np.ndarray               # (F, 4)
    face_channel: tuple[str, ...]   # per-face channel label
    creases: tuple[Crease, ...]
    ambiguous_edges: tuple[tuple[int, int], ...]  # conflicting M/V at welds
    n_tubes: int
    merged_vertex_count: int        # how many vertices the weld removed

    @property
    def channels(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.face_channel)))


def assemble_bidirectional(spec: AssemblySpec) -> AssemblyGeometry:
    """Build the merged two-channel tube arrangement."""
    tube = generate_tube(spec.tube)
    placements: list[tuple[np.ndarray, np.ndarray, str]] = []  # (R, t, channel)

    pitch = _section_pitch(tube)
    height = tube.deployed_length
    depth = _section_depth(tube)

    eye = np.eye(3)
    rot_h = np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 0.0]])  # z -> x

    cell: list[tuple[np.ndarray, np.ndarray, str]] = []
    for j in range(spec.n_vertical):
        cell.append((eye, np.array([j * pitch, 0.0, 0.0]), CHANNEL_VERTICAL))
    for j in range(spec.n_horizontal):
        side = 1 if j % 2 == 0 else -1
        level = j // 2
        if side > 0:
            ty = depth * (1 + level)
        else:
            ty = -depth * (1 + level)
        cell.append((rot_h, np.array([0.0, ty, 0.0]), CHANNEL_HORIZONTAL))

    cell_extent = _cell_extent(tube, cell)
    nx, ny, nz = spec.pattern
    for ix in range(nx):
        for iy in range(ny):
            for iz in range(nz):
                shift = np.array(
                    [ix * cell_extent[0], iy * cell_extent[1], iz * height]
                )
                for rot, t, channel in cell:
                    placements.append((rot, t + shift, channel))

    return _merge_placements(tube, placements)


def merge_coincident(vertices: np.ndarray, faces: np.ndarray,
                     tol: float = MERGE_TOL_MM) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Weld vertices closer than tol; returns (vertices, faces, old->new map).

    The pass is idempotent: re-running it on its own output is a no-op.
    """
    from scipy.spatial import cKDTree

    tree = cKDTree(vertices)
    pairs = tree.query_pairs(tol, output_type="ndarray")
    parent = np.arange(len(vertices))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    roots = np.array([find(i) for i in range(len(vertices))])
    keep, inverse = np.unique(roots, return_inverse=True)
    return vertices[keep], inverse[faces], inverse


def _section_pitch(tube: TubeGeometry) -> float:
    """Horizontal pitch so facing corner lines of neighbours coincide."""
    verts = tube.spec.cross_section.vertices
    return float(verts[:, 0].max() - verts[:, 0].min())


def _section_depth(tube: TubeGeometry) -> float:
    verts = tube.spec.cross_section.vertices
    return float(verts[:, 1].max() - verts[:, 1].min())


def _cell_extent(tube: TubeGeometry, cell) -> np.ndarray:
    pts = []
    for rot, t, _ in cell:
        pts.append(tube.vertices @ rot.T + t)
    allpts = np.vstack(pts)
    return allpts.max(axis=0) - allpts.min(axis=0)


def _merge_placements(tube: TubeGeometry, placements) -> AssemblyGeometry:
    n_tube_v = tube.vertices.shape[0]
    all_verts = []
    all_faces = []
    channels: list[str] = []
    crease_records = []  # (i, j, kind, tag)
    for idx, (rot, t, channel) in enumerate(placements):
        offset = idx * n_tube_v
        all_verts.append(tube.vertices @ rot.T + t)
        all_faces.append(tube.faces + offset)
        channels.extend([channel] * tube.faces.shape[0])
        for c in tube.creases:
            crease_records.append((c.i + offset, c.j + offset, c.kind, c.tag))

    vertices = np.vstack(all_verts)
    faces = np.vstack(all_faces)
    _check_interfaces(vertices, n_tube_v, len(placements))
    welded_verts, welded_faces, vmap = merge_coincident(vertices, faces)

    # re-key creases to welded ids; conflicting tags at welded edges are
    # reported instead of silently resolved
    by_edge: dict[tuple[int, int], list] = {}
    for i, j, kind, tag in crease_records:
        wi, wj = int(vmap[i]), int(vmap[j])
        key = (min(wi, wj), max(wi, wj))
        by_edge.setdefault(key, []).append((kind, tag))
    creases = []
    ambiguous = []
    for (wi, wj), recs in sorted(by_edge.items()):
        tags = {tag for _, tag in recs}
        kind = recs[0][0]
        if len(tags) == 1:
            creases.append(Crease(wi, wj, kind, recs[0][1], ()))
        else:
            ambiguous.append((wi, wj))
            creases.append(Crease(wi, wj, kind, "boundary", ()))

    return AssemblyGeometry(
        vertices=welded_verts,
        faces=welded_faces,
        face_channel=tuple(channels),
        creases=tuple(creases),
        ambiguous_edges=tuple(ambiguous),
        n_tubes=len(placements),
        merged_vertex_count=vertices.shape[0] - welded_verts.shape[0],
    )


def _check_interfaces(vertices: np.ndarray, n_tube_v: int, n_tubes: int) -> None:
    """Near-coincident interface vertices must match within the weld tol.

    Vertex pairs from different tubes that land close to each other but
    not within tolerance indicate incongruent joined faces.
    """
    from scipy.spatial import cKDTree

    tree = cKDTree(vertices)
    near = tree.query_pairs(10 * MERGE_TOL_MM, output_type="ndarray")
    if near.size == 0:
        return
    tube_of = near // n_tube_v
    cross = near[tube_of[:, 0] != tube_of[:, 1]]
    for a, b in cross:
        d = float(np.linalg.norm(vertices[a] - vertices[b]))
        if MERGE_TOL_MM < d:
            raise InterfaceMismatch(
                "interface vertices %d and %d are %.3e mm apart (tol %.0e)"
                % (a, b, d, MERGE_TOL_MM)
            )
