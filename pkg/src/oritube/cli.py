"""Command-line interface: design checks, geometry, folding, simulation,
fitting and experiment analysis.

Exit codes: 0 success, 1 runtime error, 2 negative domain verdict
(inadmissible section, unknown material), 64 usage error.  All outputs
land inside --out and are byte-identical for fixed inputs and seed.
"""

from __future__ import annotations

import argparse
import io
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .assembly import AssemblySpec, assemble_bidirectional
from .barhinge import build_bar_hinge, tensile_sweep
from .catalog import catalog_text, material_catalog
from .characterize import (
    force_summary,
    load_experiment_csv,
    load_trajectory_csv,
    pressure_displacement,
    step_response_metrics,
    trajectory_dependency,
)
from .config import DesignConfig, load_config
from .errors import OritubeError, UnknownMaterial
from .folding import fold_configuration, fold_sweep, write_sweep_csv
from .foldcore import t_deployed
from .mesh import close_tube_surface, triangulate_quads
from .ogden import OgdenParams, fit_ogden, fit_report_text, load_utm_csv
from .pattern import export_svg_pattern, unroll_crease_pattern
from .section import check_admissible, make_quad_section
from .stlio import export_stl
from .svgplot import render_plot
from .tube import TubeGeometry, TubeSpec, generate_tube

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERDICT = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("error: %s\n" % message)
        raise SystemExit(EXIT_USAGE)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _load_cfg(args)
        return args.handler(args, cfg)
    except OritubeError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_ERROR


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=argparse.SUPPRESS,
                        help="key = value design config")
    common.add_argument("--out", type=Path, default=argparse.SUPPRESS,
                        help="output directory (default: out)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for randomized steps")
    common.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS)

    parser = _Parser(prog="oritube", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", type=Path, default=None,
                        help="key = value design config")
    parser.add_argument("--out", type=Path, default=Path("out"),
                        help="output directory (default: out)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized steps")
    parser.add_argument("--verbose", action="store_true", default=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_command(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_command("check", help="cross-section admissibility report")
    _design_flags(p)
    p.add_argument("--tol", type=float, default=1e-6, help="length tolerance (mm)")
    p.set_defaults(handler=cmd_check)

    p = add_command("generate", help="tube/assembly STL, crease pattern, report")
    _design_flags(p)
    p.set_defaults(handler=cmd_generate)

    p = add_command("fold", help="rigid-folding sweep CSV and optional frames")
    _design_flags(p)
    p.add_argument("--steps", type=int, default=21)
    p.add_argument("--frames", action="store_true", help="write an STL per step")
    p.set_defaults(handler=cmd_fold)

    p = add_command("simulate", help="tensile force-displacement sweep")
    _design_flags(p)
    p.add_argument("--frames", action="store_true", help="write an STL per step")
    p.set_defaults(handler=cmd_simulate)

    p = add_command("fit", help="fit Ogden constants to a UTM CSV")
    p.add_argument("--csv", type=Path, help="time_s,force_N,elongation_mm file")
    p.add_argument("--width-mm", type=float, default=6.0)
    p.add_argument("--thickness-mm", type=float, default=2.0)
    p.add_argument("--gauge-mm", type=float, default=25.0)
    p.set_defaults(handler=cmd_fit)

    p = add_command("analyze", help="experiment metrics report and plots")
    p.add_argument("--data", type=Path, help="directory of experiment CSVs "
                   "(defaults to the bundled reference traces)")
    p.set_defaults(handler=cmd_analyze)

    p = add_command("materials", help="materials catalog lookup")
    p.add_argument("name", nargs="?", help="material name (omit to list all)")
    p.set_defaults(handler=cmd_materials)
    return parser


def _design_flags(p) -> None:
    p.add_argument("--a", type=float, dest="section_a", help="section side a (mm)")
    p.add_argument("--b", type=float, dest="section_b", help="section side b (mm)")
    p.add_argument("--theta1", type=float, help="slope of edge group 1 (deg)")
    p.add_argument("--theta2", type=float, help="slope of edge group 2 (deg)")
    p.add_argument("--alpha", type=float, help="projection angle (deg)")
    p.add_argument("--unit-length", type=float, help="zigzag segment length (mm)")
    p.add_argument("--units", type=int, help="number of zigzag units")


def _load_cfg(args) -> DesignConfig:
    cfg = load_config(args.config) if getattr(args, "config", None) else DesignConfig()
    overrides = {
        "section_a": "section_a_mm",
        "section_b": "section_b_mm",
        "theta1": "theta1_deg",
        "theta2": "theta2_deg",
        "alpha": "alpha_deg",
        "unit_length": "unit_length_mm",
        "units": "n_units",
    }
    for flag, key in overrides.items():
        value = getattr(args, flag, None)
        if value is not None:
            setattr(cfg, key, value)
    return cfg


def _section(cfg: DesignConfig):
    return make_quad_section(
        cfg.section_a_mm, cfg.section_b_mm, cfg.theta1_deg, cfg.theta2_deg
    )


def _tube_spec(cfg: DesignConfig) -> TubeSpec:
    return TubeSpec(
        cross_section=_section(cfg),
        unit_length=cfg.unit_length_mm,
        n_units=cfg.n_units,
        alpha_deg=cfg.alpha_deg,
    )


def _outdir(args) -> Path:
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_capped_stl(path: Path, tube: TubeGeometry, vertices: np.ndarray) -> int:
    verts, tris = close_tube_surface(
        vertices, tube.faces, tube.ring_ids(0), tube.ring_ids(tube.n_stories)
    )
    with open(path, "wb") as fh:
        return export_stl(verts, tris, fh)


def cmd_check(args, cfg) -> int:
    section = _section(cfg)
    report = check_admissible(section, tol=args.tol)
    print(report.describe())
    return EXIT_OK if report.admissible else EXIT_VERDICT


def cmd_generate(args, cfg) -> int:
    out = _outdir(args)
    tube = generate_tube(_tube_spec(cfg))
    nbytes = _write_capped_stl(out / "tube.stl", tube, tube.vertices)

    pattern = unroll_crease_pattern(tube)
    with open(out / "pattern.svg", "wb") as fh:
        export_svg_pattern(pattern, fh)
    from .figures import save_pattern_figure

    save_pattern_figure(out / "pattern_figure.svg", pattern)

    lines = [
        "vertices = %d" % tube.vertices.shape[0],
        "faces = %d" % tube.faces.shape[0],
        "creases_interior = %d" % sum(1 for c in tube.creases if c.tag != "boundary"),
        "creases_boundary = %d" % sum(1 for c in tube.creases if c.tag == "boundary"),
        "deployed_length_mm = %.9g" % tube.deployed_length,
        "tube_stl_bytes = %d" % nbytes,
        "pattern_area_mm2 = %.9g" % pattern.total_area,
    ]

    if cfg.n_vertical > 1 or cfg.n_horizontal > 0:
        spec = AssemblySpec(
            tube=_tube_spec(cfg),
            n_vertical=cfg.n_vertical,
            n_horizontal=cfg.n_horizontal,
            pattern=(cfg.pattern_x, cfg.pattern_y, cfg.pattern_z),
        )
        asm = assemble_bidirectional(spec)
        tris = triangulate_quads(asm.vertices, asm.faces)
        with open(out / "assembly.stl", "wb") as fh:
            asm_bytes = export_stl(asm.vertices, tris, fh)
        lines += [
            "assembly_tubes = %d" % asm.n_tubes,
            "assembly_vertices = %d" % asm.vertices.shape[0],
            "assembly_merged_vertices = %d" % asm.merged_vertex_count,
            "assembly_channels = %s" % ",".join(asm.channels),
            "assembly_ambiguous_crease_edges = %d" % len(asm.ambiguous_edges),
            "assembly_stl_bytes = %d" % asm_bytes,
        ]

    report = "\n".join(lines) + "\n"
    (out / "geometry_report.txt").write_text(report, encoding="utf-8")
    if args.verbose:
        print(report, end="")
    return EXIT_OK


def cmd_fold(args, cfg) -> int:
    if args.steps < 2:
        print("error: --steps must be at least 2", file=sys.stderr)
        return EXIT_USAGE
    out = _outdir(args)
    tube = generate_tube(_tube_spec(cfg))
    states = fold_sweep(tube, args.steps)
    with open(out / "fold_sweep.csv", "w", encoding="utf-8", newline="") as fh:
        write_sweep_csv(states, fh)

    from .figures import save_line_figure

    ts = [s.t for s in states]
    save_line_figure(
        out / "volume_vs_t.svg",
        {"enclosed volume": (ts, [s.enclosed_volume for s in states])},
        "fold parameter t",
        "volume (mm^3)",
    )
    save_line_figure(
        out / "length_vs_t.svg",
        {
            "axial length": (ts, [s.axial_length for s in states]),
            "slab height": (ts, [s.transverse_height for s in states]),
        },
        "fold parameter t",
        "mm",
    )
    if args.frames:
        frames = out / "frames"
        frames.mkdir(exist_ok=True)
        for i, state in enumerate(states):
            _write_capped_stl(frames / ("fold_%03d.stl" % i), tube, state.vertices)

    td = t_deployed(tube.family)
    dep = fold_configuration(tube, td)
    report = "\n".join(
        [
            "steps = %d" % args.steps,
            "deployed_t = %.9g" % td,
            "deployed_axial_length_mm = %.9g" % dep.axial_length,
            "max_volume_mm3 = %.9g" % max(s.enclosed_volume for s in states),
        ]
    ) + "\n"
    (out / "fold_report.txt").write_text(report, encoding="utf-8")
    if args.verbose:
        print(report, end="")
    return EXIT_OK


def cmd_simulate(args, cfg) -> int:
    out = _outdir(args)
    tube = generate_tube(_tube_spec(cfg))
    material = OgdenParams(mu1=cfg.mu1_pa, alpha1=cfg.alpha1)
    model = build_bar_hinge(
        tube, material, thickness=cfg.thickness_mm,
        crease_stiffness_scale=cfg.crease_scale,
    )
    if cfg.displacement_steps < 1:
        print("error: displacement_steps must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    displacements = np.linspace(
        cfg.displacement_start_mm, cfg.displacement_stop_mm, cfg.displacement_steps
    )
    results = tensile_sweep(model, displacements)

    with open(out / "force_displacement.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write("displacement_mm,force_N,energy_Nmm\n")
        for d, f, eq in results:
            fh.write("%.10g,%.10g,%.10g\n" % (d, f, eq.energy))

    from .figures import save_line_figure

    save_line_figure(
        out / "force_displacement.svg",
        {"axial force": ([d for d, _, _ in results], [f for _, f, _ in results])},
        "displacement (mm)",
        "force (N)",
    )
    if args.frames:
        frames = out / "frames"
        frames.mkdir(exist_ok=True)
        for i, (_, _, eq) in enumerate(results):
            _write_capped_stl(frames / ("tensile_%03d.stl" % i), tube, eq.positions)

    last = results[-1][2]
    report = "\n".join(
        [
            "nodes = %d" % model.n_nodes,
            "bars = %d" % model.bars.shape[0],
            "hinges = %d" % model.hinges.shape[0],
            "steps = %d" % len(results),
            "final_force_N = %.9g" % results[-1][1],
            "final_energy_Nmm = %.9g" % last.energy,
            "final_gradient_norm_N = %.3e" % last.grad_norm,
        ]
    ) + "\n"
    (out / "sim_report.txt").write_text(report, encoding="utf-8")
    if args.verbose:
        print(report, end="")
    return EXIT_OK


def cmd_fit(args, cfg) -> int:
    out = _outdir(args)
    if args.csv is not None:
        with open(args.csv, "r", encoding="utf-8") as fh:
            curve = load_utm_csv(
                fh, width_mm=args.width_mm, thickness_mm=args.thickness_mm,
                gauge_mm=args.gauge_mm,
            )
    else:
        text = resources.files("oritube.data").joinpath("utm_tensile.csv").read_text()
        curve = load_utm_csv(
            io.StringIO(text), width_mm=args.width_mm,
            thickness_mm=args.thickness_mm, gauge_mm=args.gauge_mm,
        )
    fit = fit_ogden(curve, seed=args.seed)
    report = fit_report_text(fit, len(curve))
    (out / "fit_report.txt").write_text(report, encoding="utf-8")

    from .figures import save_line_figure
    from .ogden import uniaxial_stress_curve

    stretches = 1.0 + curve.strain
    save_line_figure(
        out / "stress_strain_fit.svg",
        {
            "measured": (curve.strain, curve.stress / 1e6),
            "fit": (curve.strain, uniaxial_stress_curve(fit.params, stretches) / 1e6),
        },
        "engineering strain",
        "nominal stress (MPa)",
    )
    print(report, end="")
    return EXIT_OK


def cmd_analyze(args, cfg) -> int:
    out = _outdir(args)
    lines = []

    def read(name: str):
        if args.data is not None:
            path = args.data / name
            if not path.exists():
                return None
            return io.StringIO(path.read_text(encoding="utf-8"))
        res = resources.files("oritube.data").joinpath(name)
        if not res.is_file():
            return None
        return io.StringIO(res.read_text())

    force_stream = read("force_trace.csv")
    any_input = False
    if force_stream is not None:
        rec = load_experiment_csv(force_stream, label="force")
        summary = force_summary(rec)
        lines += [
            "max_force_N = %.6g" % summary["max_force_N"],
            "pressure_at_max_kPa = %.6g" % summary["pressure_at_max_kPa"],
        ]
        with open(out / "force_trace.svg", "wb") as fh:
            render_plot(
                {"force": (rec.time_s, rec.force_n)}, "time (s)", "force (N)", fh,
                title="pull force under vacuum",
            )
        any_input = True

    step_stream = read("step_response.csv")
    if step_stream is not None:
        rec = load_experiment_csv(step_stream, label="step")
        m = step_response_metrics(rec)
        lines += [
            "actuation_time_s = %.6g" % m.actuation_s,
            "hold_time_s = %.6g" % m.hold_s,
            "release_time_s = %.6g" % m.release_s,
            "cycle_time_s = %.6g" % m.cycle_s,
        ]
        with open(out / "step_response.svg", "wb") as fh:
            render_plot(
                {"displacement": (rec.time_s, rec.displacement_mm)},
                "time (s)", "displacement (mm)", fh, title="step response",
            )
        any_input = True

    pressure_recs = []
    for level in range(5, 100, 5):
        stream = read("pressure_step_%03d.csv" % level)
        if stream is not None:
            pressure_recs.append(load_experiment_csv(stream, label=str(level)))
    if pressure_recs:
        pd = pressure_displacement(pressure_recs)
        lines += [
            "plateau_pressure_kPa = %.6g" % pd["plateau_pressure_kPa"],
            "max_displacement_mm = %.6g" % pd["max_displacement_mm"],
        ]
        curve = pd["curve"]
        with open(out / "pressure_displacement.svg", "wb") as fh:
            render_plot(
                {"steady displacement": (curve[:, 0], curve[:, 1])},
                "pressure (kPa)", "displacement (mm)", fh,
                title="vacuum vs stroke",
            )
        any_input = True

    traj_stream = read("trajectories.csv")
    if traj_stream is not None:
        rounds = load_trajectory_csv(traj_stream)
        dep = trajectory_dependency(rounds)
        for direction, vals in sorted(dep.items()):
            lines += [
                "direction%d_rms_mm = %.6g" % (direction, vals["rms_deviation_mm"]),
                "direction%d_deviation_pct = %.6g"
                % (direction, vals["normalized_deviation_pct"]),
            ]
        series = {}
        for r in rounds:
            series["D%d R%d" % (r.direction, r.round_index)] = (r.x_mm, r.y_mm)
        with open(out / "trajectories.svg", "wb") as fh:
            render_plot(series, "x (mm)", "y (mm)", fh, title="stroke repeatability")
        any_input = True

    if not any_input:
        print("error: no experiment CSVs found in %s" % args.data, file=sys.stderr)
        return EXIT_ERROR

    report = "\n".join(lines) + "\n"
    (out / "metrics_report.txt").write_text(report, encoding="utf-8")
    print(report, end="")
    return EXIT_OK


def cmd_materials(args, cfg) -> int:
    if args.name is None:
        print(catalog_text(), end="")
        return EXIT_OK
    try:
        entry = material_catalog(args.name)
    except UnknownMaterial as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_VERDICT
    print("name = %s" % entry.name)
    print("shore_hardness = %s" % entry.shore_hardness)
    print("tear_strength_kn_m = %s" % _opt(entry.tear_strength_kn_m))
    print("tensile_strength_mpa = %s" % _opt(entry.tensile_strength_mpa))
    print("elongation_break_pct = %s" % _opt(entry.elongation_break_pct))
    print("viscosity_mpa_s = %s" % _opt(entry.viscosity_mpa_s))
    print("problems = %s" % entry.problems)
    return EXIT_OK


def _opt(rng) -> str:
    if rng is None:
        return "NA"
    lo, hi = rng
    return "%g" % lo if lo == hi else "%g-%g" % (lo, hi)


if __name__ == "__main__":
    sys.exit(main())
