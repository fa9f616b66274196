"""Reduced-order bar-and-hinge elasticity for tube structures.

Panels become stiff axial bars (edges plus the shorter diagonal) and the
bending DOFs become rotational springs: one across each panel diagonal
and a softer one on every interior crease.  Small-strain bar stiffness
comes from the Ogden initial modulus E0 = 3*mu1; this linearization is a
stated approximation of the hyperelastic law used in volumetric FEM.

Energy convention (documented for the record):

    E = sum_bars  1/2 * k * (L - L0)^2        k = E0 * h * w_trib / L0  [N/mm]
      + sum_hinges 1/2 * kappa * wrap(theta - theta0)^2               [N*mm]

with theta the signed dihedral torsion angle and wrap() the principal
value in (-pi, pi], so flat rest states do not sit on a branch cut.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidMaterial, NoConvergence, UnderConstrained
from .mesh import triangulate_quads
from .ogden import OgdenParams
from .tube import TubeGeometry

PA_TO_N_PER_MM2 = 1e-6

#: free-DOF gradient norm required of an equilibrium (N)
GRAD_TOL = 1e-8
MAX_ITER = 100_000


@dataclass(frozen=True)
class BarHingeModel:
    tube: TubeGeometry = field(repr=False)
    nodes: np.ndarray               # rest positions (N, 3) mm
    bars: np.ndarray                # (B, 2) node ids
    bar_stiffness: np.ndarray       # (B,) N/mm
    bar_rest: np.ndarray            # (B,) mm
    hinges: np.ndarray              # (H, 4) node ids (wing, edge, edge, wing)
    hinge_stiffness: np.ndarray     # (H,) N*mm/rad
    hinge_rest: np.ndarray          # (H,) rad
    hinge_kind: tuple[str, ...]     # 'panel' | 'crease'
    end_rings: tuple[np.ndarray, np.ndarray]

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]


@dataclass(frozen=True)
class BoundaryCondition:
    """Prescribed position for one node; mask selects the pinned axes."""

    node: int
    position: np.ndarray
    mask: tuple[bool, bool, bool] = (True, True, True)


@dataclass(frozen=True)
class Equilibrium:
    positions: np.ndarray
    energy: float                   # N*mm
    reactions: np.ndarray           # -dE/dx at constrained components, (N, 3)
    iterations: int
    grad_norm: float                # final free-DOF gradient norm (N)


def build_bar_hinge(tube: TubeGeometry, material: OgdenParams, thickness: float,
                    crease_stiffness_scale: float = 0.01) -> BarHingeModel:
    """Assemble the bar-and-hinge model on the deployed tube geometry."""
    if material.mu1 <= 0:
        raise InvalidMaterial("mu1 must be positive")
    if not 0.0 < crease_stiffness_scale <= 1.0:
        raise InvalidMaterial("crease_stiffness_scale must lie in (0, 1]")
    if thickness <= 0:
        raise InvalidMaterial("thickness must be positive")

    e0 = material.youngs_modulus * PA_TO_N_PER_MM2  # N/mm^2
    verts = tube.vertices
    tris = triangulate_quads(verts, tube.faces)

    # bars: deduplicated panel edges plus each panel's split diagonal
    edge_width: dict[tuple[int, int], float] = {}
    quad_area = {}
    diagonals = []
    for f, quad in enumerate(tube.faces):
        pts = verts[quad]
        area = _quad_area3d(pts)
        quad_area[f] = area
        for idx in range(4):
            a, b = int(quad[idx]), int(quad[(idx + 1) % 4])
            key = (min(a, b), max(a, b))
            length = float(np.linalg.norm(verts[a] - verts[b]))
            edge_width[key] = edge_width.get(key, 0.0) + area / (2.0 * length)
        ta, tb = tris[2 * f], tris[2 * f + 1]
        shared = sorted(set(ta) & set(tb))
        diagonals.append((f, (shared[0], shared[1])))

    bars = []
    stiffness = []
    rest = []
    for (a, b), width in sorted(edge_width.items()):
        length = float(np.linalg.norm(verts[a] - verts[b]))
        bars.append((a, b))
        stiffness.append(e0 * thickness * width / length)
        rest.append(length)
    for f, (a, b) in diagonals:
        length = float(np.linalg.norm(verts[a] - verts[b]))
        width = quad_area[f] / (2.0 * length)
        bars.append((a, b))
        stiffness.append(e0 * thickness * width / length)
        rest.append(length)

    # hinges: panel bending across each diagonal, springs on interior creases
    tri_of_edge: dict[tuple[int, int], list[int]] = {}
    for t, tri in enumerate(tris):
        for idx in range(3):
            a, b = int(tri[idx]), int(tri[(idx + 1) % 3])
            tri_of_edge.setdefault((min(a, b), max(a, b)), []).append(t)

    hinges = []
    h_stiff = []
    h_kind = []
    for f, (a, b) in diagonals:
        w1 = _apex(tris[2 * f], a, b)
        w2 = _apex(tris[2 * f + 1], a, b)
        length = float(np.linalg.norm(verts[a] - verts[b]))
        hinges.append((w1, a, b, w2))
        h_stiff.append(e0 * thickness ** 3 / 12.0 * length ** 2 / quad_area[f])
        h_kind.append("panel")
    for crease in tube.creases:
        if crease.tag == "boundary":
            continue
        key = (min(crease.i, crease.j), max(crease.i, crease.j))
        t1, t2 = tri_of_edge[key]
        w1 = _apex(tris[t1], *key)
        w2 = _apex(tris[t2], *key)
        length = float(np.linalg.norm(verts[crease.i] - verts[crease.j]))
        area = 0.5 * (quad_area[_face_of_tri(t1)] + quad_area[_face_of_tri(t2)])
        hinges.append((w1, key[0], key[1], w2))
        h_stiff.append(
            crease_stiffness_scale * e0 * thickness ** 3 / 12.0 * length ** 2 / area
        )
        h_kind.append("crease")

    hinges_arr = np.array(hinges, dtype=int)
    rest_angles, _ = _torsion_angles(verts, hinges_arr)
    return BarHingeModel(
        tube=tube,
        nodes=verts.copy(),
        bars=np.array(bars, dtype=int),
        bar_stiffness=np.array(stiffness),
        bar_rest=np.array(rest),
        hinges=hinges_arr,
        hinge_stiffness=np.array(h_stiff),
        hinge_rest=rest_angles,
        hinge_kind=tuple(h_kind),
        end_rings=(tube.ring_ids(0), tube.ring_ids(tube.n_stories)),
    )


def energy(model: BarHingeModel, positions: np.ndarray) -> float:
    """Total elastic energy (N*mm) at the given node positions."""
    return _energy_gradient(model, positions, want_gradient=False)[0]


def gradient(model: BarHingeModel, positions: np.ndarray) -> np.ndarray:
    """Exact analytic energy gradient, shape (N, 3), units N."""
    return _energy_gradient(model, positions, want_gradient=True)[1]


def minimize_energy(model: BarHingeModel, bcs: list[BoundaryCondition],
                    x0: np.ndarray | None = None) -> Equilibrium:
    """Find a local equilibrium under prescribed node positions.

    Constrained components are eliminated exactly; free DOFs run through
    L-BFGS with the analytic gradient until the free-gradient norm drops
    below GRAD_TOL.  ``x0`` optionally warm-starts the free DOFs.
    """
    from scipy.optimize import minimize as scipy_minimize

    n = model.n_nodes
    fixed = np.zeros((n, 3), dtype=bool)
    target = model.nodes.copy() if x0 is None else np.asarray(x0, dtype=float).copy()
    for bc in bcs:
        mask = np.asarray(bc.mask, dtype=bool)
        fixed[bc.node, mask] = True
        target[bc.node, mask] = np.asarray(bc.position, dtype=float)[mask]
    _check_constrained(model, fixed)

    free = ~fixed
    x = target.copy()

    def fun(free_flat):
        x[free] = free_flat
        e, g = _energy_gradient(model, x, want_gradient=True)
        return e, g[free]

    def grad_only(free_flat):
        x[free] = free_flat
        return _energy_gradient(model, x, want_gradient=True)[1][free]

    def hessp(free_flat, p):
        # directional derivative of the analytic gradient: exact Hessian
        # action up to O(eps^2)
        eps = 1e-6 * max(1.0, float(np.linalg.norm(free_flat))) / max(
            float(np.linalg.norm(p)), 1e-300
        )
        return (grad_only(free_flat + eps * p) - grad_only(free_flat - eps * p)) / (
            2.0 * eps
        )

    total_iters = 0
    best = x[free].ravel().copy()
    g = grad_only(best)
    g_norm = float(np.linalg.norm(g))
    if g_norm >= GRAD_TOL:
        res = scipy_minimize(
            fun,
            best,
            jac=True,
            method="L-BFGS-B",
            options={
                "maxiter": MAX_ITER,
                "maxfun": MAX_ITER,
                "ftol": 1e-18,
                "gtol": 1e-12,
                "maxcor": 30,
            },
        )
        total_iters += int(res.nit)
        best = res.x
        g = grad_only(best)
        g_norm = float(np.linalg.norm(g))
    # full Newton polish: L-BFGS line searches stall once energy
    # differences reach machine epsilon, but the Hessian stays well
    # conditioned, so plain Newton steps finish the job
    from scipy.sparse.linalg import LinearOperator, cg

    for _ in range(20):
        if g_norm < GRAD_TOL:
            break
        op = LinearOperator(
            (best.size, best.size), matvec=lambda p: hessp(best, p)
        )
        step, _info = cg(op, -g, rtol=1e-10, atol=0.0, maxiter=10 * best.size)
        trial = best + step
        g_trial = grad_only(trial)
        if not np.all(np.isfinite(g_trial)) or np.linalg.norm(g_trial) >= g_norm:
            break  # Newton step no longer improves: accept what we have
        best = trial
        g = g_trial
        g_norm = float(np.linalg.norm(g))
        total_iters += 1
    if g_norm >= GRAD_TOL:
        raise NoConvergence(
            "free-DOF gradient norm %.3e N after %d iterations" % (g_norm, total_iters)
        )
    x[free] = best

    e, g = _energy_gradient(model, x, want_gradient=True)
    reactions = np.zeros((n, 3))
    reactions[fixed] = -g[fixed]
    return Equilibrium(
        positions=x.copy(),
        energy=e,
        reactions=reactions,
        iterations=total_iters,
        grad_norm=g_norm,
    )


def end_pull_bcs(model: BarHingeModel, displacement: float) -> list[BoundaryCondition]:
    """Pin the bottom ring, pull the top ring axially by `displacement` mm."""
    bottom, top = model.end_rings
    bcs = [BoundaryCondition(int(i), model.nodes[i]) for i in bottom]
    shift = np.array([0.0, 0.0, displacement])
    bcs += [BoundaryCondition(int(i), model.nodes[i] + shift) for i in top]
    return bcs


def axial_force(model: BarHingeModel, eq: Equilibrium) -> float:
    """Axial holding force on the pulled end ring (positive in tension)."""
    _, top = model.end_rings
    return float(-eq.reactions[top, 2].sum())


def tensile_sweep(model: BarHingeModel, displacements) -> list[tuple[float, float, Equilibrium]]:
    """Equilibria under increasing axial end displacement, warm-started.

    Returns (displacement_mm, force_N, equilibrium) per step.
    """
    displacements = list(displacements)
    if sorted(displacements) != displacements:
        raise ValueError("displacements must be sorted ascending")
    out = []
    warm = None
    for d in displacements:
        eq = minimize_energy(model, end_pull_bcs(model, d), x0=warm)
        warm = eq.positions
        out.append((float(d), axial_force(model, eq), eq))
    return out


def _check_constrained(model: BarHingeModel, fixed: np.ndarray) -> None:
    """All six rigid-body modes must be killed by the constraint set."""
    if not fixed.any():
        raise UnderConstrained("no boundary conditions given")
    center = model.nodes.mean(axis=0)
    rel = model.nodes - center
    modes = []
    for axis in range(3):
        m = np.zeros_like(model.nodes)
        m[:, axis] = 1.0
        modes.append(m)
    for axis in range(3):
        e = np.zeros(3)
        e[axis] = 1.0
        modes.append(np.cross(np.broadcast_to(e, rel.shape), rel))
    restricted = np.stack([m[fixed] for m in modes])
    rank = np.linalg.matrix_rank(restricted, tol=1e-9)
    if rank < 6:
        raise UnderConstrained(
            "constraints leave %d rigid-body mode(s) free" % (6 - rank)
        )


def _energy_gradient(model: BarHingeModel, positions: np.ndarray,
                     want_gradient: bool) -> tuple[float, np.ndarray | None]:
    x = np.asarray(positions, dtype=float)
    if x.shape != model.nodes.shape:
        raise ValueError("positions must match the node array shape")
    grad = np.zeros_like(x) if want_gradient else None

    i, j = model.bars[:, 0], model.bars[:, 1]
    d = x[j] - x[i]
    length = np.linalg.norm(d, axis=1)
    stretch = length - model.bar_rest
    e_total = float(0.5 * np.sum(model.bar_stiffness * stretch ** 2))
    if want_gradient:
        coef = model.bar_stiffness * stretch / np.maximum(length, 1e-300)
        f = coef[:, None] * d
        np.add.at(grad, j, f)
        np.add.at(grad, i, -f)

    theta, tgrad = _torsion_angles(x, model.hinges, want_gradient=want_gradient)
    delta = _wrap_angle(theta - model.hinge_rest)
    e_total += float(0.5 * np.sum(model.hinge_stiffness * delta ** 2))
    if want_gradient:
        coef = model.hinge_stiffness * delta
        for slot in range(4):
            np.add.at(grad, model.hinges[:, slot], coef[:, None] * tgrad[slot])
    return e_total, grad


def _torsion_angles(x: np.ndarray, hinges: np.ndarray, want_gradient: bool = False):
    """Signed torsion angle per hinge and, optionally, exact gradients.

    The angle is measured so that coplanar, unfolded wings give 0.
    """
    p0 = x[hinges[:, 0]]
    p1 = x[hinges[:, 1]]
    p2 = x[hinges[:, 2]]
    p3 = x[hinges[:, 3]]
    b1 = p1 - p0
    b2 = p2 - p1
    b3 = p3 - p2
    n1 = np.cross(b1, b2)
    n2 = np.cross(b2, b3)
    b2n = np.linalg.norm(b2, axis=1)
    sin_term = np.einsum("ij,ij->i", b1, n2) * b2n
    cos_term = np.einsum("ij,ij->i", n1, n2)
    phi = np.arctan2(sin_term, cos_term)
    # shift so that the unfolded flat state (trans, phi = +/-pi) maps to 0
    theta = _wrap_angle(math.pi - phi)
    if not want_gradient:
        return theta, None

    n1sq = np.einsum("ij,ij->i", n1, n1)
    n2sq = np.einsum("ij,ij->i", n2, n2)
    g0 = -(b2n / np.maximum(n1sq, 1e-300))[:, None] * n1
    g3 = (b2n / np.maximum(n2sq, 1e-300))[:, None] * n2
    b12 = np.einsum("ij,ij->i", b1, b2) / np.maximum(b2n ** 2, 1e-300)
    b32 = np.einsum("ij,ij->i", b3, b2) / np.maximum(b2n ** 2, 1e-300)
    g1 = -(1.0 + b12)[:, None] * g0 + b32[:, None] * g3
    g2 = b12[:, None] * g0 - (1.0 + b32)[:, None] * g3
    # theta = pi - phi (wrapped): d theta/dx = -d phi/dx
    return theta, (-g0, -g1, -g2, -g3)


def _wrap_angle(a):
    return (np.asarray(a) + math.pi) % (2.0 * math.pi) - math.pi


def _apex(tri, a, b) -> int:
    for v in tri:
        if v != a and v != b:
            return int(v)
    raise ValueError("degenerate triangle")


def _face_of_tri(t: int) -> int:
    return t // 2


def _quad_area3d(pts: np.ndarray) -> float:
    n1 = np.cross(pts[1] - pts[0], pts[2] - pts[0])
    n2 = np.cross(pts[2] - pts[0], pts[3] - pts[0])
    return 0.5 * (np.linalg.norm(n1) + np.linalg.norm(n2))
