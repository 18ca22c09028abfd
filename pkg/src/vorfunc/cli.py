"""Command-line front end.

Subcommands:

    functional        functional value(s) of the Delaunay triangulation of a
                      point set (vf / rajan / rf with --alpha); --dim 3 with
                      --diagonal evaluates an octahedron decomposition
    scan              optimality scan over random point sets (CSV or JSON)
    counterexamples   the bundled non-optimality experiments (JSON report)
    render            SVG of a triangulation, its subdivision, or the
                      circumcenter-map image

Exit codes: 0 ok, 2 input/parse error, 3 degenerate input (the diagnostic
names the offending labels), 4 experiment verdict failed.  Identical
invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .errors import NotGeneralPosition, VorfuncError
from .experiments import (
    DEFAULT_SEED,
    fold_region_probe,
    octahedron_counterexample,
    octahedron_decomposition,
    optimality_scan,
    topological_counterexample,
)
from .functional2d import FunctionalReport, radius_functional, rajan_triangle, vf_triangulation
from .geom import Triangle2
from .render import svg_gamma_image, svg_subdivision, svg_triangulation
from .subdivision import barycentric_subdivide, vf_sd_cell
from .tri2d import PointSet2, delaunay


@dataclass
class RunConfig:
    """Validated run options shared by the subcommands."""

    command: str
    input_path: str = ""
    seed: int = DEFAULT_SEED
    samples: int = 1_000_000
    out_format: str = "json"
    out_path: str = ""

    def __post_init__(self):
        if self.samples < 1000:
            raise ValueError("--samples must be at least 1000")
        if self.out_format not in ("json", "csv"):
            raise ValueError("--format must be json or csv")


def _fail(code: int, message: str):
    print(f"error: {message}", file=sys.stderr)
    raise SystemExit(code)


def _load_points(path: str) -> np.ndarray:
    try:
        with open(path) as fh:
            obj = json.load(fh)
        pts = np.asarray(obj["points"], float)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        _fail(2, f"cannot read point set from {path!r}: {exc}")
    return pts


def _emit(text: str, out_path: str):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_diagonal(spec: str, n: int) -> tuple:
    labels = "ABCDEX" if n == 6 else "ABCDEFGHIJKLMNOPQRSTUVWXYZ"[:n]
    spec = spec.strip()
    if "," in spec:
        i, j = (int(s) for s in spec.split(","))
    elif len(spec) == 2 and spec.upper()[0] in labels and spec.upper()[1] in labels:
        i, j = labels.index(spec.upper()[0]), labels.index(spec.upper()[1])
    else:
        raise ValueError(f"cannot parse diagonal {spec!r}")
    if not (0 <= i < n and 0 <= j < n and i != j):
        raise ValueError(f"diagonal {spec!r} out of range")
    return i, j


def _report_text(report: FunctionalReport, fmt: str) -> str:
    if fmt == "json":
        return report.to_json() + "\n"
    lines = ["# schema=1", "simplex,contribution"]
    for idx, val in report.per_simplex:
        lines.append(f"{idx},{val!r}")
    lines.append(f"total,{report.total!r}")
    return "\n".join(lines) + "\n"


def cmd_functional(args) -> int:
    cfg = RunConfig("functional", input_path=args.input, out_format=args.format, out_path=args.out or "")
    pts = _load_points(cfg.input_path)
    if args.dim == 3:
        if pts.shape[1] != 3:
            _fail(2, f"--dim 3 expects 3D points, got shape {pts.shape}")
        try:
            diag = _parse_diagonal(args.diagonal, len(pts))
            tc = octahedron_decomposition(pts, diag)
            sd = barycentric_subdivide(tc)
            by_tet = {}
            for cell in sd.cells:
                by_tet[cell.source_index] = by_tet.get(cell.source_index, 0.0) + vf_sd_cell(cell, sd)
        except (ValueError, VorfuncError) as exc:
            _fail(2, str(exc))
        per = tuple(sorted(by_tet.items()))
        report = FunctionalReport("vf3", float(sum(by_tet.values())), per)
        _emit(_report_text(report, cfg.out_format), cfg.out_path)
        return 0
    if pts.shape[1] != 2:
        _fail(2, f"expected 2D points, got shape {pts.shape}")
    try:
        d = delaunay(PointSet2(pts))
    except NotGeneralPosition as exc:
        _fail(3, f"not in general position: labels {exc.labels}")
    if args.which == "vf":
        report = vf_triangulation(d)
    elif args.which == "rajan":
        per = tuple(
            (i, rajan_triangle(Triangle2(*d.points[list(t)]))) for i, t in enumerate(d.triangles)
        )
        report = FunctionalReport("rajan", float(sum(v for _, v in per)), per)
    elif args.which == "rf":
        report = radius_functional(d, args.alpha)
    else:
        _fail(2, f"unknown functional {args.which!r}")
    _emit(_report_text(report, cfg.out_format), cfg.out_path)
    return 0


def cmd_scan(args) -> int:
    cfg = RunConfig(
        "scan", seed=args.seed, out_format=args.format, out_path=args.out or ""
    )
    try:
        result, rows = optimality_scan(args.n, args.trials, seed=cfg.seed)
    except VorfuncError as exc:
        _fail(3, str(exc))
    if cfg.out_format == "csv":
        lines = ["# schema=1", "trial,triangulation,vf,is_delaunay,is_max"]
        for trial, idx, vf, is_d, is_max in rows:
            lines.append(f"{trial},{idx},{vf!r},{int(is_d)},{int(is_max)}")
        _emit("\n".join(lines) + "\n", cfg.out_path)
    else:
        _emit(result.to_json() + "\n", cfg.out_path)
    return 0 if result.verdict == "pass" else 4


def cmd_counterexamples(args) -> int:
    cfg = RunConfig(
        "counterexamples", seed=args.seed, samples=args.samples, out_path=args.out or ""
    )
    try:
        if args.which == "topological":
            result = topological_counterexample(samples=cfg.samples, seed=cfg.seed)
        elif args.which == "octahedron":
            result = octahedron_counterexample()
        elif args.which == "fold":
            result = fold_region_probe(seed=cfg.seed)
        else:
            _fail(2, f"unknown experiment {args.which!r}")
    except VorfuncError as exc:
        _fail(4, f"experiment could not be constructed: {exc}")
    _emit(result.to_json() + "\n", cfg.out_path)
    if result.verdict != "pass":
        _fail(4, f"experiment {result.name} verdict: {result.verdict}")
    return 0


def cmd_render(args) -> int:
    cfg = RunConfig("render", input_path=args.input, out_path=args.out or "")
    pts = _load_points(cfg.input_path)
    if pts.shape[1] != 2:
        _fail(2, f"render expects 2D points, got shape {pts.shape}")
    try:
        d = delaunay(PointSet2(pts))
    except NotGeneralPosition as exc:
        _fail(3, f"not in general position: labels {exc.labels}")
    if args.what == "triangulation":
        text = svg_triangulation(d)
    elif args.what == "subdivision":
        text = svg_subdivision(d)
    elif args.what == "gamma":
        text = svg_gamma_image(d)
    else:
        _fail(2, f"unknown render target {args.what!r}")
    _emit(text, cfg.out_path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vorfunc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("functional", help="functional of the Delaunay triangulation")
    p.add_argument("--input", required=True, help="point-set JSON path")
    p.add_argument("--which", default="vf", choices=("vf", "rajan", "rf"))
    p.add_argument("--alpha", type=float, default=2.0, help="exponent for --which rf")
    p.add_argument("--dim", type=int, default=2, choices=(2, 3))
    p.add_argument("--diagonal", default="BE", help="octahedron diagonal for --dim 3 (e.g. BE or 1,4)")
    p.add_argument("--format", default="json", choices=("json", "csv"))
    p.add_argument("--out", default="")
    p.set_defaults(func=cmd_functional)

    p = sub.add_parser("scan", help="Delaunay optimality scan over random point sets")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--format", default="csv", choices=("json", "csv"))
    p.add_argument("--out", default="")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("counterexamples", help="run a bundled non-optimality experiment")
    p.add_argument("--which", required=True, choices=("topological", "octahedron", "fold"))
    p.add_argument("--samples", type=int, default=10**7)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", default="")
    p.set_defaults(func=cmd_counterexamples)

    p = sub.add_parser("render", help="SVG rendering")
    p.add_argument("--input", required=True, help="point-set JSON path")
    p.add_argument("--what", default="triangulation", choices=("triangulation", "subdivision", "gamma"))
    p.add_argument("--out", default="")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        _fail(2, str(exc))


if __name__ == "__main__":
    raise SystemExit(main())
