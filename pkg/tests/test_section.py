import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oritube.errors import DegenerateAngles, DegeneratePolygon
from oritube.section import CrossSection, check_admissible, make_quad_section

from oracles import brute_force_admissible


def test_unit_square_admissible():
    cs = CrossSection(np.array([[0, 0], [1, 0], [1, 1], [0, 1]], float))
    report = check_admissible(cs)
    assert report.admissible
    assert len(report.groups) == 2
    for g in report.groups:
        assert g.forward_length == pytest.approx(1.0)
        assert g.backward_length == pytest.approx(1.0)


def test_parallelogram_admissible():
    cs = CrossSection(np.array([[0, 0], [2, 0], [3, 1], [1, 1]], float))
    report = check_admissible(cs)
    assert report.admissible
    assert len(report.groups) == 2


def test_kite_inadmissible():
    # frozen via the brute-force oracle: all four slopes distinct
    verts = np.array([[0, 0], [2, 0], [3, 2], [0, 1]], float)
    assert brute_force_admissible(verts) is False
    report = check_admissible(CrossSection(verts))
    assert not report.admissible
    assert len(report.violations) >= 1


def test_every_edge_in_exactly_one_group():
    cs = make_quad_section(2, 1, 10, 70)
    report = check_admissible(cs)
    seen = sorted(i for g in report.groups for i in g.edge_indices)
    assert seen == list(range(cs.n_edges))


def test_degenerate_polygon_rejected():
    with pytest.raises(DegeneratePolygon):
        CrossSection(np.array([[0, 0], [1, 0]], float))
    with pytest.raises(DegeneratePolygon):
        CrossSection(np.array([[0, 0], [1, 0], [1.0 + 1e-12, 0], [0, 1]], float))
    # bow-tie self-intersection
    with pytest.raises(DegeneratePolygon):
        CrossSection(np.array([[0, 0], [1, 1], [1, 0], [0, 1]], float))


def test_make_quad_section_examples():
    sq = make_quad_section(1, 1, 0, 90)
    assert np.allclose(sq.vertices, [[0, 0], [1, 0], [1, 1], [0, 1]])
    para = make_quad_section(2, 1, 0, 60)
    assert check_admissible(para).admissible
    with pytest.raises(DegenerateAngles):
        make_quad_section(1, 1, 0, 0)
    with pytest.raises(DegenerateAngles):
        make_quad_section(1, 1, 10, 190)


def test_hexagonal_admissible_section():
    # three slope groups, balanced in each: still admissible
    hexagon = CrossSection(
        np.array(
            [[0, 0], [2, 0], [3, 1], [3, 2], [1, 2], [0, 1]], float
        )
    )
    report = check_admissible(hexagon)
    assert report.admissible == brute_force_admissible(hexagon.vertices)


@settings(max_examples=60, deadline=None)
@given(
    a=st.floats(0.1, 50),
    b=st.floats(0.1, 50),
    t1=st.floats(0, 179),
    dt=st.floats(5, 175),
    angle=st.floats(-math.pi, math.pi),
    scale=st.floats(0.01, 100),
)
def test_rotation_and_scale_invariance(a, b, t1, dt, angle, scale):
    cs = make_quad_section(a, b, t1, t1 + dt)
    base = check_admissible(cs).admissible
    assert base  # construction guarantees admissibility
    assert check_admissible(cs.rotated(angle)).admissible == base
    assert check_admissible(cs.scaled(scale)).admissible == base


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_matches_brute_force_oracle_on_random_quads(data):
    rng_seed = data.draw(st.integers(0, 2 ** 31))
    rng = np.random.default_rng(rng_seed)
    a = rng.uniform(0.5, 20)
    b = rng.uniform(0.5, 20)
    t1 = rng.uniform(0, 180)
    t2 = t1 + rng.uniform(10, 170)
    verts = make_quad_section(a, b, t1, t2).vertices.copy()
    if data.draw(st.booleans()):
        verts[rng.integers(0, 4)] += rng.uniform(0.1, 0.5, size=2)
    try:
        cs = CrossSection(verts)
    except DegeneratePolygon:
        return
    assert check_admissible(cs).admissible == brute_force_admissible(verts)
