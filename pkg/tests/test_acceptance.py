"""Acceptance gate: one test per release criterion, at stated tolerances.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS line per
criterion; any assertion failure marks that criterion failed.
"""

import io
import struct
import time
from contextlib import redirect_stderr, redirect_stdout

import numpy as np
import pytest

from oritube import TubeSpec, fold_configuration, fold_sweep, generate_tube, make_quad_section
from oritube.barhinge import (
    BarHingeModel,
    BoundaryCondition,
    axial_force,
    build_bar_hinge,
    end_pull_bcs,
    energy,
    gradient,
    minimize_energy,
)
from oritube.assembly import merge_coincident
from oritube.characterize import (
    force_summary,
    load_experiment_csv,
    load_trajectory_csv,
    pressure_displacement,
    step_response_metrics,
    trajectory_dependency,
)
from oritube.cli import main as cli_main
from oritube.mesh import close_tube_surface
from oritube.ogden import OgdenParams, StressStrainCurve, fit_ogden, ogden_energy, uniaxial_stress, uniaxial_stress_curve
from oritube.section import CrossSection, check_admissible, make_quad_section as quad
from oritube.errors import DegeneratePolygon
from oritube.stlio import export_stl, read_stl

from conftest import RESIN, edge_residual, planarity_residual
from oracles import brute_force_admissible, monte_carlo_volume


def report(n, text):
    print("\n[PASS] criterion %d: %s" % (n, text))


@pytest.fixture(scope="module")
def default_tube():
    """a = b = 15 mm, alpha = 45 deg, 3 units."""
    section = make_quad_section(15.0, 15.0, 0.0, 90.0)
    return generate_tube(TubeSpec(cross_section=section, unit_length=15.0, n_units=3))


@pytest.fixture(scope="module")
def unit_model():
    section = make_quad_section(15.0, 15.0, 0.0, 90.0)
    tube = generate_tube(TubeSpec(cross_section=section, unit_length=15.0, n_units=1))
    return build_bar_hinge(tube, RESIN, thickness=1.0)


def test_criterion_01_admissibility_oracle_race():
    rng = np.random.default_rng(2024)
    polygons = []
    while len(polygons) < 500:  # constructed admissible
        verts = quad(
            rng.uniform(0.5, 20.0), rng.uniform(0.5, 20.0),
            rng.uniform(0.0, 180.0), rng.uniform(0.0, 180.0) + rng.uniform(10, 170),
        ).vertices
        angle = rng.uniform(0, 2 * np.pi)
        rot = np.array(
            [[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]]
        )
        polygons.append(verts @ rot.T * rng.uniform(0.1, 10.0))
    while len(polygons) < 1000:  # perturbed, generically inadmissible
        base = polygons[len(polygons) - 500].copy()
        base[rng.integers(0, 4)] += rng.uniform(0.05, 0.5, size=2) * np.sign(
            rng.standard_normal(2)
        )
        try:
            CrossSection(base)
        except DegeneratePolygon:
            continue
        polygons.append(base)

    start = time.perf_counter()
    agree = 0
    for verts in polygons:
        mine = check_admissible(CrossSection(verts)).admissible
        ref = brute_force_admissible(verts)
        agree += mine == ref
    elapsed = time.perf_counter() - start
    assert agree == 1000
    assert elapsed < 1.0
    report(1, "1000/1000 oracle agreement in %.3f s" % elapsed)


def test_criterion_02_rigid_fold_validity(default_tube):
    start = time.perf_counter()
    states = fold_sweep(default_tube, 101)
    worst_edge = max(edge_residual(default_tube, s.vertices) for s in states)
    worst_plane = max(planarity_residual(default_tube, s.vertices) for s in states)
    vols = np.array([s.enclosed_volume for s in states])
    elapsed = time.perf_counter() - start
    assert worst_edge < 1e-9
    assert worst_plane < 1e-9
    assert vols[0] <= 1e-9 and vols[-1] <= 1e-9
    assert np.all(vols[1:-1] > 0)
    assert np.max(np.abs(vols - vols[::-1])) < 1e-6 * vols.max()
    assert elapsed < 30.0
    report(
        2,
        "101-step sweep: edge %.1e mm, planarity %.1e mm, symmetric, %.1f s"
        % (worst_edge, worst_plane, elapsed),
    )


def test_criterion_03_volume_monte_carlo(default_tube):
    state = fold_configuration(default_tube, 0.5)
    verts, tris = close_tube_surface(
        state.vertices, default_tube.faces,
        default_tube.ring_ids(0), default_tube.ring_ids(default_tube.n_stories),
    )
    mc = monte_carlo_volume(verts, tris, n_samples=1_000_000, seed=11)
    rel = abs(mc - state.enclosed_volume) / state.enclosed_volume
    assert rel < 0.01
    report(3, "divergence %.1f vs MC %.1f mm^3 (rel %.4f)" % (state.enclosed_volume, mc, rel))


def test_criterion_04_material_fit_recovery():
    start = time.perf_counter()
    truth = OgdenParams(mu1=708211.0002, alpha1=2.33765815)
    eps = np.linspace(0.0, 1.5, 50)
    clean = StressStrainCurve(strain=eps, stress=uniaxial_stress_curve(truth, 1 + eps))
    fit = fit_ogden(clean)
    assert abs(fit.params.mu1 - truth.mu1) / truth.mu1 < 1e-3
    assert abs(fit.params.alpha1 - truth.alpha1) / truth.alpha1 < 1e-3

    rng = np.random.default_rng(42)
    noisy = StressStrainCurve(
        strain=eps, stress=clean.stress * (1 + 0.02 * rng.standard_normal(eps.size))
    )
    nfit = fit_ogden(noisy)
    elapsed = time.perf_counter() - start
    assert abs(nfit.params.mu1 - truth.mu1) / truth.mu1 < 0.02
    assert abs(nfit.params.alpha1 - truth.alpha1) / truth.alpha1 < 0.02
    assert nfit.r_squared > 0.99
    assert elapsed < 5.0
    report(
        4,
        "noiseless %.2e / noisy %.2e rel error, R2 %.4f, %.1f s"
        % (
            abs(fit.params.mu1 - truth.mu1) / truth.mu1,
            abs(nfit.params.mu1 - truth.mu1) / truth.mu1,
            nfit.r_squared,
            elapsed,
        ),
    )


def test_criterion_05_stress_energy_consistency():
    truth = OgdenParams(mu1=708211.0002, alpha1=2.33765815)
    h = 1e-7
    worst = 0.0
    for lam in np.linspace(0.5, 3.0, 100):
        lam = float(lam)

        def w(v):
            return ogden_energy(truth, v, v ** -0.5, v ** -0.5)

        fd = (w(lam + h) - w(lam - h)) / (2 * h)
        rel = abs(uniaxial_stress(truth, lam) - fd) / max(abs(fd), 1.0)
        worst = max(worst, rel)
    assert worst < 1e-6
    report(5, "max stress/energy-derivative mismatch %.2e" % worst)


def test_criterion_06_bar_hinge_gradient(default_tube):
    model = build_bar_hinge(default_tube, RESIN, thickness=1.0)
    rng = np.random.default_rng(5)
    h = 1e-6
    worst = 0.0
    for _ in range(100):
        x = model.nodes + 0.1 * rng.standard_normal(model.nodes.shape)
        g = gradient(model, x)
        gfd = np.zeros_like(g)
        for i in range(x.shape[0]):
            for c in range(3):
                xp = x.copy()
                xp[i, c] += h
                xm = x.copy()
                xm[i, c] -= h
                gfd[i, c] = (energy(model, xp) - energy(model, xm)) / (2 * h)
        worst = max(worst, float(np.linalg.norm(g - gfd) / np.linalg.norm(gfd)))
    assert worst < 1e-6
    report(6, "max analytic-vs-FD gradient error %.2e over 100 states" % worst)


def test_criterion_07_simulation_sanity(unit_model):
    eq0 = minimize_energy(unit_model, end_pull_bcs(unit_model, 0.0))
    zero_reaction = float(np.abs(eq0.reactions).max())
    assert zero_reaction < 1e-8

    f_quarter, f_full = _quarter_and_full_force(unit_model, displacement=1.0)
    rel = abs(f_full - 4.0 * f_quarter) / abs(f_full)
    assert rel < 0.02
    report(
        7,
        "zero-disp reaction %.1e N; full %.4f vs 4x quarter %.4f N (rel %.4f)"
        % (zero_reaction, f_full, 4 * f_quarter, rel),
    )


def test_criterion_08_characterization_pipeline():
    from importlib import resources

    def data(name):
        return io.StringIO(resources.files("oritube.data").joinpath(name).read_text())

    fs = force_summary(load_experiment_csv(data("force_trace.csv")))
    assert abs(fs["max_force_N"] - 42.0) <= 1.0
    assert abs(fs["pressure_at_max_kPa"] - (-94.0)) <= 2.0

    sm = step_response_metrics(load_experiment_csv(data("step_response.csv")))
    assert abs(sm.actuation_s - 2.0) <= 0.3
    assert sm.cycle_s > 5.0

    recs = [
        load_experiment_csv(data("pressure_step_%03d.csv" % p), label=str(p))
        for p in range(5, 65, 5)
    ]
    pd = pressure_displacement(recs)
    assert abs(pd["plateau_pressure_kPa"] - (-35.0)) <= 3.0

    dep = trajectory_dependency(load_trajectory_csv(data("trajectories.csv")))
    assert dep[1]["normalized_deviation_pct"] < 5.0
    assert dep[2]["normalized_deviation_pct"] < 5.0
    report(
        8,
        "force %.1f N @ %.1f kPa, actuation %.2f s, cycle %.2f s, plateau %.0f kPa, "
        "deviation %.2f%%/%.2f%%"
        % (
            fs["max_force_N"], fs["pressure_at_max_kPa"], sm.actuation_s, sm.cycle_s,
            pd["plateau_pressure_kPa"],
            dep[1]["normalized_deviation_pct"], dep[2]["normalized_deviation_pct"],
        ),
    )


def test_criterion_09_export_integrity(tmp_path):
    _run_cli("--out", str(tmp_path / "g"), "generate")
    _run_cli("--out", str(tmp_path / "f"), "fold", "--steps", "5", "--frames")
    stl_files = sorted(tmp_path.rglob("*.stl"))
    assert stl_files
    for path in stl_files:
        data = path.read_bytes()
        (count,) = struct.unpack("<I", data[80:84])
        assert len(data) == 80 + 4 + 50 * count
        verts, tris = read_stl(io.BytesIO(data))
        welded_v, welded_t, _ = merge_coincident(verts.astype(float), tris, tol=1e-9)
        counts = _edge_counts(welded_t)
        if np.ptp(welded_v, axis=0).min() < 1e-9:
            # flat-folded frame: layers coincide in space, so positional
            # reconstruction doubles edge incidence; closure still means
            # no odd (boundary) edges
            assert all(v % 2 == 0 for v in counts.values()), path
        else:
            assert all(v == 2 for v in counts.values()), path
        buf = io.BytesIO()
        export_stl(verts, tris, buf)
        assert buf.getvalue() == data, path
    report(9, "%d STL files watertight, size-exact, round-trip identical" % len(stl_files))


def test_criterion_10_cli_determinism(tmp_path):
    runs = []
    for tag in ("r1", "r2"):
        root = tmp_path / tag
        stdout = {}
        stdout["check"] = _run_cli("check", "--a", "15", "--b", "15",
                                   "--theta1", "0", "--theta2", "90")
        _run_cli("--out", str(root / "g"), "--seed", "3", "generate")
        _run_cli("--out", str(root / "f"), "--seed", "3", "fold", "--steps", "7", "--frames")
        _run_cli("--out", str(root / "s"), "--seed", "3", "simulate")
        stdout["fit"] = _run_cli("--out", str(root / "t"), "--seed", "3", "fit")
        stdout["analyze"] = _run_cli("--out", str(root / "a"), "--seed", "3", "analyze")
        stdout["materials"] = _run_cli("materials")
        tree = {
            p.relative_to(root).as_posix(): p.read_bytes()
            for p in sorted(root.rglob("*"))
            if p.is_file()
        }
        runs.append((stdout, tree))
    assert runs[0][0] == runs[1][0]
    assert runs[0][1].keys() == runs[1][1].keys()
    for key in runs[0][1]:
        assert runs[0][1][key] == runs[1][1][key], key
    report(10, "all commands byte-identical across repeated runs (%d files)" % len(runs[0][1]))


def _run_cli(*argv) -> str:
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli_main(list(argv))
    assert code == 0, err.getvalue()
    return out.getvalue()


def _edge_counts(tris) -> dict:
    counts = {}
    for a, b, c in tris:
        for i, j in ((a, b), (b, c), (c, a)):
            key = (min(i, j), max(i, j))
            counts[key] = counts.get(key, 0) + 1
    return counts


def _quarter_and_full_force(model: BarHingeModel, displacement: float):
    """Symmetry check: 2x2 mirrored tube array vs one mask-constrained tube."""
    tube = model.tube
    nodes = model.nodes
    a = float(tube.spec.cross_section.vertices[:, 0].max())
    b = float(tube.spec.cross_section.vertices[:, 1].max())
    delta = float(nodes[:, 0].max() - a)
    x_plane = a + delta
    y_plane = b

    # quarter: symmetry masks on the mirror-plane nodes
    bottom, top = model.end_rings
    pinned = set(map(int, bottom)) | set(map(int, top))
    bcs = [BoundaryCondition(int(i), nodes[i]) for i in bottom]
    shift = np.array([0.0, 0.0, displacement])
    bcs += [BoundaryCondition(int(i), nodes[i] + shift) for i in top]
    for i in range(nodes.shape[0]):
        if i in pinned:
            continue
        if abs(nodes[i, 0] - x_plane) < 1e-9:
            bcs.append(BoundaryCondition(i, nodes[i], mask=(True, False, False)))
        if abs(nodes[i, 1] - y_plane) < 1e-9:
            bcs.append(BoundaryCondition(i, nodes[i], mask=(False, True, False)))
    f_quarter = axial_force(model, minimize_energy(model, bcs))

    # full: four mirror copies welded at the planes
    def mirrored(v, cx=None, cy=None):
        w = v.copy()
        if cx is not None:
            w[:, 0] = 2 * cx - w[:, 0]
        if cy is not None:
            w[:, 1] = 2 * cy - w[:, 1]
        return w

    copies = [
        nodes,
        mirrored(nodes, cx=x_plane),
        mirrored(nodes, cy=y_plane),
        mirrored(nodes, cx=x_plane, cy=y_plane),
    ]
    n = nodes.shape[0]
    all_nodes = np.vstack(copies)
    stack = lambda arr, off: arr + off  # noqa: E731
    faces = np.vstack([tube.faces + k * n for k in range(4)])
    welded, _, vmap = merge_coincident(all_nodes, faces)

    bars, ks, l0 = [], [], []
    hinges, hk, h0 = [], [], []
    for k in range(4):
        off = k * n
        for (i, j), kk, rr in zip(model.bars, model.bar_stiffness, model.bar_rest):
            bars.append((vmap[i + off], vmap[j + off]))
            ks.append(kk)
            l0.append(rr)
        for hg, kk, rr in zip(model.hinges, model.hinge_stiffness, model.hinge_rest):
            hinges.append(tuple(vmap[hg + off]))
            hk.append(kk)
            h0.append(rr)
    full = BarHingeModel(
        tube=tube,
        nodes=welded,
        bars=np.array(bars, dtype=int),
        bar_stiffness=np.array(ks),
        bar_rest=np.array(l0),
        hinges=np.array(hinges, dtype=int),
        hinge_stiffness=np.array(hk),
        hinge_rest=np.array(h0),
        hinge_kind=("mixed",) * len(hinges),
        end_rings=(np.array([], dtype=int), np.array([], dtype=int)),
    )
    bot_ids, top_ids = set(), set()
    for k in range(4):
        off = k * n
        for i in tube.ring_ids(0):
            bot_ids.add(int(vmap[i + off]))
        for i in tube.ring_ids(tube.n_stories):
            top_ids.add(int(vmap[i + off]))
    bcs_full = [BoundaryCondition(i, welded[i]) for i in sorted(bot_ids)]
    bcs_full += [BoundaryCondition(i, welded[i] + shift) for i in sorted(top_ids)]
    eq = minimize_energy(full, bcs_full)
    f_full = float(-eq.reactions[sorted(top_ids), 2].sum())
    return f_quarter, f_full
