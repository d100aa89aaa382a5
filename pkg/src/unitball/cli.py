"""Command-line front end.

Exit codes: 0 success, 1 bad input, 2 a hypothesis fails, 3 the conclusion
fails on a surface that meets the hypotheses (or the probe finds an
admissible surface enclosing less than a unit ball).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import verifier
from .errors import GeometryError, SpecError
from .fishbowl import FishbowlParams, build_fishbowl, export_fishbowl, fishbowl_report
from .geometry import max_abs_normal_curvature
from .mesh import tessellate, write_obj
from .probe import ProbeConfig, probe_min_volume
from .surfacespec import load_spec
from .verifier import _jsonable

EXIT_OK, EXIT_INPUT, EXIT_HYPOTHESIS, EXIT_CONCLUSION = 0, 1, 2, 3


def _write_json(path: Path, data) -> None:
    path.write_text(json.dumps(_jsonable(data), indent=2) + "\n")


def _density(text):
    n = int(text)
    if n < 2:
        raise argparse.ArgumentTypeError("density must be >= 2")
    return n


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_analyze(args) -> int:
    spec = load_spec(args.surface)
    surface = spec.build()
    rows = []
    for i, patch in enumerate(surface.patches):
        val, (u, v) = max_abs_normal_curvature(patch, n=args.density)
        rows.append({"patch": i, "label": patch.label, "max_abs_curvature": val, "param": [u, v],
                     "point": patch.position(np.asarray(u), np.asarray(v))})
    top = max(rows, key=lambda r: r["max_abs_curvature"]) if rows else None
    summary = {
        "surface": spec.canonical(),
        "analytic": surface.analytic,
        "density": args.density,
        "max_abs_curvature": top["max_abs_curvature"] if top else 0.0,
        "witness": top["point"] if top else None,
        "flat_regions": len(surface.regions),
        "patches": rows,
    }
    out = _out_dir(args)
    _write_json(out / "analyze.json", summary)
    if args.obj:
        write_obj(tessellate(surface, args.density), out / "surface.obj", spec.canonical())
    print(f"max |normal curvature| = {summary['max_abs_curvature']:.12g}")
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = load_spec(args.surface)
    surface = spec.build()
    tol_k = args.tol_curvature
    tol_c = verifier.CONTAINMENT_SLACK if args.tol_containment is None else args.tol_containment
    report = verifier.verify_theorem(surface, grid=args.density, mesh_density=args.mesh_density,
                                     curvature_tol=tol_k, containment_tol=tol_c)
    data = report.to_dict()
    data["surface"] = spec.canonical()
    data["exitCode"] = report.exit_code
    _write_json(_out_dir(args) / "verify.json", data)
    for c in report.checks:
        print(f"{c.name:28s} {'pass' if c.passed else 'FAIL'}  {c.value:.12g}")
    print(f"theoremConclusion: {data['theoremConclusion']}")
    return report.exit_code


def cmd_fishbowl(args) -> int:
    params = FishbowlParams(plate_length=args.plate_length, plate_gap=args.plate_gap,
                            half_circle_radius=args.half_circle_radius, tunnel_delta=args.tunnel_delta,
                            tunnel_length=args.tunnel_length, mesh_density=args.density)
    surface = build_fishbowl(params)
    mesh = tessellate(surface, params.mesh_density)
    report = fishbowl_report(params, surface, mesh)
    out = _out_dir(args)
    paths = export_fishbowl(surface, out, params.mesh_density, mesh)
    data = report.to_dict()
    data["obj_files"] = [p.name for p in paths]
    _write_json(out / "fishbowl.json", data)
    print(f"main body volume 22*pi/3 - 2*pi^2 = {report.main_body_closed_form:.12g}")
    print(f"enclosed volume = {report.volume:.12g} (excess {report.thin_volume:.6g})")
    print(f"euler characteristic = {report.euler_characteristic}, genus = {report.genus:g}, "
          f"watertight = {report.watertight}")
    return EXIT_OK


def cmd_probe(args) -> int:
    config = ProbeConfig(dimension=args.dimension, budget=args.budget, seed=args.seed,
                         restarts=args.restarts, grid=args.density)
    result = probe_min_volume(config)
    out = _out_dir(args)
    (out / "probe.csv").write_text(result.log_csv())
    _write_json(out / "probe.json", result.summary())
    print(f"best feasible volume = {result.best_volume:.12g} "
          f"(4*pi/3 {'-' if result.below_unit_ball else '+'} {abs(result.summary()['best_minus_unit_ball']):.3g})")
    if result.below_unit_ball or result.report.exit_code == EXIT_CONCLUSION:
        return EXIT_CONCLUSION
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unitball", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, density):
        sp.add_argument("--out", default="unitball-out", help="output directory")
        sp.add_argument("--density", type=_density, default=density, help="sampling density per chart")
        sp.add_argument("--seed", type=int, default=7)

    a = sub.add_parser("analyze", help="curvature summary of a surface")
    a.add_argument("--surface", required=True, help="inline spec or config-file path")
    a.add_argument("--obj", action="store_true", help="also write the tessellation")
    common(a, 64)
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="run the unit-ball verification pipeline")
    v.add_argument("--surface", required=True, help="inline spec or config-file path")
    v.add_argument("--mesh-density", type=_density, default=verifier.DEFAULT_MESH_DENSITY)
    v.add_argument("--tol-curvature", type=float, default=None)
    v.add_argument("--tol-containment", type=float, default=None)
    common(v, verifier.DEFAULT_GRID)
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("fishbowl", help="build, audit and export the genus-2 fishbowl")
    d = FishbowlParams()
    f.add_argument("--plate-length", type=float, default=d.plate_length)
    f.add_argument("--plate-gap", type=float, default=d.plate_gap)
    f.add_argument("--half-circle-radius", type=float, default=d.half_circle_radius)
    f.add_argument("--tunnel-delta", type=float, default=d.tunnel_delta)
    f.add_argument("--tunnel-length", type=float, default=d.tunnel_length)
    common(f, d.mesh_density)
    f.set_defaults(func=cmd_fishbowl)

    q = sub.add_parser("probe", help="search for a small admissible volume")
    c = ProbeConfig()
    q.add_argument("--dimension", type=int, default=c.dimension)
    q.add_argument("--budget", type=int, default=c.budget)
    q.add_argument("--restarts", type=int, default=c.restarts)
    common(q, c.grid)
    q.set_defaults(func=cmd_probe)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"unitball: spec error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (GeometryError, ValueError) as exc:
        print(f"unitball: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
