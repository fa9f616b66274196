import numpy as np
import pytest

from oritube import TubeSpec, generate_tube, make_quad_section
from oritube.ogden import OgdenParams

RESIN = OgdenParams(mu1=708211.0002, alpha1=2.33765815)


@pytest.fixture(scope="session")
def square_section():
    return make_quad_section(15.0, 15.0, 0.0, 90.0)


@pytest.fixture(scope="session")
def unit_tube(square_section):
    """1-unit default square tube (8 panels)."""
    return generate_tube(
        TubeSpec(cross_section=square_section, unit_length=15.0, n_units=1)
    )


@pytest.fixture(scope="session")
def long_tube(square_section):
    """3-unit default square tube used by the fold-sweep checks."""
    return generate_tube(
        TubeSpec(cross_section=square_section, unit_length=15.0, n_units=3)
    )


@pytest.fixture(scope="session")
def resin():
    return RESIN


def edge_residual(tube, vertices) -> float:
    """Max |edge length - reference| over ring and zigzag edges (test-local)."""
    m = tube.n_section_edges
    ref = tube.vertices
    worst = 0.0
    for k in range(tube.n_rings):
        for i in range(m):
            a, b = k * m + i, k * m + (i + 1) % m
            worst = max(worst, abs(
                np.linalg.norm(vertices[a] - vertices[b])
                - np.linalg.norm(ref[a] - ref[b])
            ))
    for k in range(tube.n_rings - 1):
        for i in range(m):
            a, b = k * m + i, (k + 1) * m + i
            worst = max(worst, abs(
                np.linalg.norm(vertices[a] - vertices[b])
                - np.linalg.norm(ref[a] - ref[b])
            ))
    return worst


def planarity_residual(tube, vertices) -> float:
    worst = 0.0
    for face in tube.faces:
        pts = vertices[face]
        n = np.cross(pts[1] - pts[0], pts[2] - pts[0])
        norm = np.linalg.norm(n)
        if norm < 1e-14:
            continue
        worst = max(worst, abs(float(np.dot(pts[3] - pts[0], n / norm))))
    return worst
