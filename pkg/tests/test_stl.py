import io

import numpy as np
import pytest

from oritube.errors import EmptyMesh
from oritube.mesh import close_tube_surface, is_watertight, mesh_volume, triangulate_quads
from oritube.stlio import export_stl, read_stl, stl_byte_count

CUBE_VERTS = np.array(
    [
        [0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0],
        [0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1],
    ],
    dtype=float,
)
CUBE_QUADS = np.array(
    [
        [0, 3, 2, 1],  # bottom (normal -z)
        [4, 5, 6, 7],  # top
        [0, 1, 5, 4],
        [1, 2, 6, 5],
        [2, 3, 7, 6],
        [3, 0, 4, 7],
    ]
)


def cube_tris():
    return triangulate_quads(CUBE_VERTS, CUBE_QUADS)


def test_cube_stl_size():
    buf = io.BytesIO()
    nbytes = export_stl(CUBE_VERTS, cube_tris(), buf)
    assert nbytes == 80 + 4 + 12 * 50 == stl_byte_count(12)
    assert len(buf.getvalue()) == nbytes


def test_cube_volume_and_watertight():
    tris = cube_tris()
    assert is_watertight(tris)
    assert mesh_volume(CUBE_VERTS, tris) == pytest.approx(1.0, abs=1e-12)


def test_roundtrip_is_bit_exact():
    buf = io.BytesIO()
    export_stl(CUBE_VERTS, cube_tris(), buf)
    first = buf.getvalue()
    buf.seek(0)
    verts, tris = read_stl(buf)
    assert np.array_equal(
        verts, CUBE_VERTS[cube_tris()].reshape(-1, 3).astype(np.float32)
    )
    buf2 = io.BytesIO()
    export_stl(verts, tris, buf2)
    assert buf2.getvalue() == first


def test_unit_tube_open_surface_bytes(unit_tube):
    tris = triangulate_quads(unit_tube.vertices, unit_tube.faces)
    assert tris.shape[0] == 16
    buf = io.BytesIO()
    nbytes = export_stl(unit_tube.vertices, tris, buf)
    assert nbytes == 80 + 4 + 16 * 50 == 884


def test_capped_tube_watertight(unit_tube):
    verts, tris = close_tube_surface(
        unit_tube.vertices, unit_tube.faces,
        unit_tube.ring_ids(0), unit_tube.ring_ids(unit_tube.n_stories),
    )
    assert is_watertight(tris)
    assert mesh_volume(verts, tris) > 0


def test_empty_mesh_rejected():
    with pytest.raises(EmptyMesh):
        export_stl(CUBE_VERTS, np.empty((0, 3), dtype=int), io.BytesIO())


def test_quads_split_along_shorter_diagonal():
    verts = np.array([[0, 0, 0], [4, 0, 0], [5, 1, 0], [1, 1, 0]], float)
    tris = triangulate_quads(verts, np.array([[0, 1, 2, 3]]))
    # diagonal 1-3 is shorter than 0-2 and must be an edge of both triangles
    edges = {tuple(sorted((t[i], t[(i + 1) % 3]))) for t in tris for i in range(3)}
    assert (1, 3) in edges
    assert (0, 2) not in edges
