"""Deployed tube geometry: sweep an admissible section along a zigzag path."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import foldcore
from .errors import DegenerateSpec, InadmissibleSection
from .mesh import fold_angle
from .section import CrossSection, check_admissible

#: fold parameter used only to disambiguate mountain/valley at creases that
#: are exactly flat in the deployed state (slightly toward the t=0 flat end)
_TAG_SAMPLE_T = 0.45


@dataclass(frozen=True)
class TubeSpec:
    """Projection parameters for a single tube."""

    cross_section: CrossSection
    unit_length: float          # panel edge length along the zigzag (mm)
    n_units: int = 1            # one unit = two zigzag segments
    alpha_deg: float = 45.0     # zigzag half-angle to the tube axis

    def __post_init__(self):
        if not 0.0 < self.alpha_deg < 90.0:
            raise DegenerateSpec("alpha must lie strictly inside (0, 90) degrees")
        if self.unit_length <= 0:
            raise DegenerateSpec("unit_length must be positive")
        if self.n_units < 1:
            raise DegenerateSpec("n_units must be at least 1")


@dataclass(frozen=True)
class Crease:
    """Interior or boundary edge of the panel mesh."""

    i: int                      # vertex ids
    j: int
    kind: str                   # 'ring' | 'zigzag'
    tag: str                    # 'mountain' | 'valley' | 'boundary'
    faces: tuple[int, ...]      # adjacent panel indices


@dataclass(frozen=True)
class TubeGeometry:
    """Deployed tube mesh with crease labels.

    Vertex (i, k), section vertex i on ring k, sits at row ``k*m + i``.
    Panels are parallelograms; panel (i, k) spans section edge i between
    rings k and k+1.
    """

    spec: TubeSpec
    vertices: np.ndarray        # (m*(S+1), 3) mm
    faces: np.ndarray           # (m*S, 4) vertex ids, outward winding
    creases: tuple[Crease, ...]
    deployed_length: float      # axial extent of the deployed state (mm)
    family: foldcore.FoldFamily = field(repr=False)

    @property
    def n_section_edges(self) -> int:
        return self.family.n_edges

    @property
    def n_stories(self) -> int:
        return self.family.n_stories

    @property
    def n_rings(self) -> int:
        return self.family.n_rings

    def vertex_id(self, i: int, k: int) -> int:
        return k * self.n_section_edges + i

    def ring_ids(self, k: int) -> np.ndarray:
        m = self.n_section_edges
        return np.arange(k * m, (k + 1) * m)

    def face_id(self, i: int, k: int) -> int:
        return k * self.n_section_edges + i


def generate_tube(spec: TubeSpec) -> TubeGeometry:
    """Build the deployed tube for an admissible cross-section.

    The section is swept along 2*n_units zigzag segments of length
    ``unit_length`` alternating at +/- alpha to the tube axis (z); every
    panel is a parallelogram and the stack of rings is a translate chain.
    """
    report = check_admissible(spec.cross_section)
    if not report.admissible:
        raise InadmissibleSection(report.describe())

    fam = foldcore.build_family(
        spec.cross_section, spec.alpha_deg, spec.unit_length, spec.n_units
    )
    t_dep = foldcore.t_deployed(fam)
    vertices = foldcore.vertices_at(fam, t_dep)

    m, n_stories = fam.n_edges, fam.n_stories
    faces = np.empty((m * n_stories, 4), dtype=int)
    for k in range(n_stories):
        for i in range(m):
            a = k * m + i
            b = k * m + (i + 1) % m
            faces[k * m + i] = (a, b, b + m, a + m)

    creases = _label_creases(fam, vertices, faces)
    deployed_length = n_stories * spec.unit_length * math.cos(
        math.radians(spec.alpha_deg)
    )
    return TubeGeometry(
        spec=spec,
        vertices=vertices,
        faces=faces,
        creases=tuple(creases),
        deployed_length=deployed_length,
        family=fam,
    )


def _label_creases(fam: foldcore.FoldFamily, vertices: np.ndarray,
                   faces: np.ndarray) -> list[Crease]:
    """Enumerate mesh edges and tag them mountain/valley/boundary.

    Mountain/valley is decided by the fold-angle sign in a slightly folded
    configuration, because creases of the flattening slope groups are
    exactly flat in the deployed state.
    """
    m, n_stories = fam.n_edges, fam.n_stories
    sample = foldcore.vertices_at(fam, _TAG_SAMPLE_T)

    creases: list[Crease] = []
    # ring edges: boundary on the two end rings, hinges in between
    for k in range(n_stories + 1):
        for i in range(m):
            a = k * m + i
            b = k * m + (i + 1) % m
            if k == 0 or k == n_stories:
                adj = (k * m + i,) if k == 0 else ((k - 1) * m + i,)
                creases.append(Crease(a, b, "ring", "boundary", adj))
            else:
                below = (k - 1) * m + i
                above = k * m + i
                tag = _mv_tag(sample, faces[below], faces[above], (a, b))
                creases.append(Crease(a, b, "ring", tag, (below, above)))
    # zigzag edges: always shared by the two circumferential neighbours
    for k in range(n_stories):
        for i in range(m):
            a = k * m + i
            b = (k + 1) * m + i
            left = k * m + (i - 1) % m
            right = k * m + i
            tag = _mv_tag(sample, faces[left], faces[right], (a, b))
            creases.append(Crease(a, b, "zigzag", tag, (left, right)))
    return creases


def _mv_tag(sample_vertices: np.ndarray, face_a: np.ndarray, face_b: np.ndarray,
            edge: tuple[int, int]) -> str:
    angle = fold_angle(sample_vertices, face_a, face_b, edge)
    return "mountain" if angle >= 0 else "valley"
