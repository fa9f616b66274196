"""Binary STL writing/reading for tube meshes (units mm, little-endian)."""

from __future__ import annotations

import struct

import numpy as np

from .errors import EmptyMesh, IoFailure

_HEADER = b"oritube binary stl (mm)"


def export_stl(vertices: np.ndarray, triangles: np.ndarray, stream) -> int:
    """Write a binary STL: 80-byte header, uint32 count, 50 bytes/triangle.

    Facet normals follow the right-hand rule on the stored vertex order.
    Returns the number of bytes written.
    """
    triangles = np.asarray(triangles, dtype=int)
    if triangles.size == 0:
        raise EmptyMesh("no triangles to export")
    v32 = np.asarray(vertices, dtype="<f4")
    count = triangles.shape[0]
    try:
        stream.write(_HEADER.ljust(80, b"\0"))
        stream.write(struct.pack("<I", count))
        for tri in triangles:
            a, b, c = (v32[tri[0]], v32[tri[1]], v32[tri[2]])
            n = np.cross(
                b.astype(np.float64) - a.astype(np.float64),
                c.astype(np.float64) - a.astype(np.float64),
            )
            norm = np.linalg.norm(n)
            n = (n / norm if norm > 0 else n).astype("<f4")
            stream.write(struct.pack("<3f", *n))
            stream.write(a.tobytes())
            stream.write(b.tobytes())
            stream.write(c.tobytes())
            stream.write(struct.pack("<H", 0))
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    return 84 + 50 * count


def read_stl(stream) -> tuple[np.ndarray, np.ndarray]:
    """Parse a binary STL into (vertices (3T, 3) float32, triangles (T, 3))."""
    try:
        header = stream.read(80)
        if len(header) < 80:
            raise IoFailure("truncated STL header")
        (count,) = struct.unpack("<I", stream.read(4))
        body = stream.read(50 * count)
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    if len(body) != 50 * count:
        raise IoFailure("truncated STL body")
    raw = np.frombuffer(body, dtype=np.uint8).reshape(count, 50)
    floats = raw[:, :48].copy().view("<f4").reshape(count, 4, 3)
    verts = floats[:, 1:4, :].reshape(-1, 3)
    tris = np.arange(3 * count, dtype=int).reshape(count, 3)
    return verts, tris


def stl_byte_count(n_triangles: int) -> int:
    """Size of a binary STL with the given triangle count."""
    return 84 + 50 * n_triangles
