"""Command-line front end: datasets, filtrations, projected distances and plots.

Exit codes: 0 on success, 2 for unusable input, 3 when a computation does
not produce a finite number.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from .complex import (GridSpec, MultiFiltration, distance_field, freudenthal_grid, gaussian_kde,
                      make_bifiltration, read_cloud, read_filtration, sample_circle_dataset,
                      scott_bandwidth, write_cloud, write_filtration)
from .distances import (LineSpec, OptimizerConfig, UpsilonEvaluator, default_lines, fibered_matching_distance,
                        ism_gamma, projected_barcode, simplex_volume, sliced_gamma)
from .persistence import write_barcode_csv
from .sheaf import read_rectangles

EXIT_INPUT = 2
EXIT_NUMERIC = 3


class InputError(Exception):
    pass


class NumericError(Exception):
    pass


def _degrees(text: str | None):
    if text is None:
        return None
    try:
        p, q = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected P:Q, got {text!r}")
    if p > q:
        raise argparse.ArgumentTypeError("degree window requires P <= Q")
    return p, q


def _out_dir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load(path: str):
    p = Path(path)
    if not p.exists():
        raise InputError(f"no such file: {p}")
    with open(p, encoding="utf-8") as fh:
        first = next((ln.split()[0] for ln in fh if ln.strip() and not ln.startswith("#")), "")
    try:
        if first == "rect":
            return read_rectangles(p)
        return read_filtration(p)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _load_pair(a: str, b: str):
    f, g = _load(a), _load(b)
    nf = f.n_params if isinstance(f, MultiFiltration) else 2
    ng = g.n_params if isinstance(g, MultiFiltration) else 2
    if nf != ng:
        raise InputError(f"parameter count mismatch: {a} has {nf}, {b} has {ng}")
    return f, g


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    return json.loads(json.dumps(cfg, default=str))


def _finite(x: float, what: str) -> float:
    if not math.isfinite(x):
        raise NumericError(f"{what} is not finite ({x})")
    return float(x)


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def _optimizer(args) -> OptimizerConfig:
    return OptimizerConfig(grid_points=args.grid_points, grid_resolution=args.grid_resolution,
                           step=args.step, iterations=args.iterations, delta=args.delta,
                           multistart=args.multistart, seed=args.seed)


def write_upsilon_csv(ev: UpsilonEvaluator, path: Path) -> list[tuple]:
    rows = sorted(ev.cache.items())
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([f"u{i + 1}" for i in range(ev.n_params)] + ["upsilon"])
        for u, (val, _) in rows:
            w.writerow([repr(x) for x in u] + [repr(val)])
    return [(u, val) for u, (val, _) in rows]


def svg_line_plot(xs, ys, path: Path, xlabel: str = "t", ylabel: str = "upsilon",
                  title: str = "", width: int = 640, height: int = 400) -> None:
    """A plain SVG polyline with axes, five ticks per axis and labels."""
    xs, ys = np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)
    left, right, top, bottom = 70, 20, 40, 50
    x0, x1 = (float(xs.min()), float(xs.max())) if len(xs) else (0.0, 1.0)
    y0, y1 = 0.0, float(ys.max()) if len(ys) and ys.max() > 0 else 1.0
    x1 = x1 if x1 > x0 else x0 + 1
    pw, ph = width - left - right, height - top - bottom

    def sx(x):
        return left + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return top + ph - (y - y0) / (y1 - y0) * ph

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
             f'font-family="sans-serif" font-size="12">',
             f'<rect width="{width}" height="{height}" fill="white"/>',
             f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
             f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>']
    for k in range(5):
        tx = x0 + (x1 - x0) * k / 4
        ty = y0 + (y1 - y0) * k / 4
        parts.append(f'<line x1="{sx(tx):.1f}" y1="{top + ph}" x2="{sx(tx):.1f}" y2="{top + ph + 5}" stroke="black"/>')
        parts.append(f'<text x="{sx(tx):.1f}" y="{top + ph + 18}" text-anchor="middle">{tx:.3g}</text>')
        parts.append(f'<line x1="{left - 5}" y1="{sy(ty):.1f}" x2="{left}" y2="{sy(ty):.1f}" stroke="black"/>')
        parts.append(f'<text x="{left - 8}" y="{sy(ty) + 4:.1f}" text-anchor="end">{ty:.3g}</text>')
    pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
    parts.append(f'<polyline points="{pts}" fill="none" stroke="steelblue" stroke-width="1.5"/>')
    parts.append(f'<text x="{left + pw / 2}" y="{height - 10}" text-anchor="middle">{xlabel}</text>')
    parts.append(f'<text x="15" y="{top + ph / 2}" text-anchor="middle" '
                 f'transform="rotate(-90 15 {top + ph / 2})">{ylabel}</text>')
    if title:
        parts.append(f'<text x="{width / 2}" y="20" text-anchor="middle">{title}</text>')
    parts.append("</svg>")
    path.write_text("\n".join(parts) + "\n", encoding="utf-8")


def _emit_curve(ev: UpsilonEvaluator, out: Path) -> None:
    rows = write_upsilon_csv(ev, out / "upsilon.csv")
    if ev.n_params == 2:
        t = [u[0] for u, _ in rows]
        svg_line_plot(t, [v for _, v in rows], out / "upsilon.svg",
                      xlabel="t  (u = (t, 1 - t))", ylabel="bottleneck distance",
                      title="Upsilon along the simplex")


def cmd_gen_dataset(args) -> int:
    out = _out_dir(args.out)
    X = sample_circle_dataset(args.n, args.radius, args.noise, 0, args.seed)
    Y = sample_circle_dataset(args.n, args.radius, args.noise, args.outliers, args.seed)
    write_cloud(X, out / "X.csv")
    write_cloud(Y, out / "Y.csv")
    _write_json(out / "gen-dataset.json", {"config": _config(args), "files": ["X.csv", "Y.csv"]})
    return 0


def cmd_build(args) -> int:
    out = _out_dir(args.out)
    path = Path(args.cloud)
    if not path.exists():
        raise InputError(f"no such file: {path}")
    try:
        cloud = read_cloud(path)
    except (KeyError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    if len(cloud) == 0:
        raise InputError(f"{path}: empty point cloud")
    lo, hi = args.box
    grid = GridSpec.square(args.grid, lo, hi)
    bw = args.bandwidth if args.bandwidth is not None else scott_bandwidth(cloud)
    if bw <= 0:
        raise InputError("bandwidth must be positive")
    cx = freudenthal_grid(grid)
    f = make_bifiltration(cx, [distance_field(cloud, grid), gaussian_kde(cloud, bw, grid)], [False, True])
    target = out / (path.stem + ".filt")
    write_filtration(f, target)
    _write_json(out / (path.stem + ".build.json"),
                {"config": _config(args), "bandwidth": bw, "vertices": cx.vertex_count,
                 "simplices": len(cx), "file": target.name})
    return 0


def cmd_ism(args) -> int:
    out = _out_dir(args.out)
    f, g = _load_pair(args.f, args.g)
    ev = UpsilonEvaluator(f, g, args.degrees)
    t0 = time.perf_counter()
    res = ism_gamma(f, g, _optimizer(args), evaluator=ev)
    _finite(res.value, "ISM value")
    _emit_curve(ev, out)
    _write_json(out / "ism.json", {**res.to_dict(), "seconds": time.perf_counter() - t0,
                                   "config": _config(args)})
    return 0


def _sliced_values(f, g, args, ev) -> dict:
    return {str(p): _finite(sliced_gamma(f, g, p, points=args.grid_points, samples=args.samples,
                                         seed=args.seed, normalization=args.normalization, evaluator=ev),
                            f"sliced distance for p={p}")
            for p in args.p}


def cmd_sliced(args) -> int:
    out = _out_dir(args.out)
    f, g = _load_pair(args.f, args.g)
    ev = UpsilonEvaluator(f, g, args.degrees)
    vals = _sliced_values(f, g, args, ev)
    write_upsilon_csv(ev, out / "upsilon.csv")
    _write_json(out / "sliced.json", {"values": vals, "volume": simplex_volume(ev.n_params),
                                      "evaluations": ev.evaluations, "config": _config(args)})
    return 0


def cmd_matching(args) -> int:
    out = _out_dir(args.out)
    f, g = _load_pair(args.f, args.g)
    if isinstance(f, MultiFiltration) and isinstance(g, MultiFiltration):
        lines = default_lines(f, g, args.directions, args.offsets)
    else:
        R = 4.0
        lines = [LineSpec.from_angle(th, float(s))
                 for th in np.linspace(0, math.pi / 2, args.directions + 2)[1:-1]
                 for s in np.linspace(-R, R, args.offsets)]
    res = fibered_matching_distance(f, g, lines)
    _finite(res.value, "matching distance")
    _write_json(out / "matching.json", {**res.to_dict(), "config": _config(args)})
    return 0


def cmd_project(args) -> int:
    out = _out_dir(args.out)
    u = np.asarray(args.u, dtype=float)
    if np.any(u < 0) or u.sum() <= 0:
        raise InputError("--u must be nonnegative and nonzero")
    u = u / u.sum()
    inputs = [_load(args.f)] if args.g is None else list(_load_pair(args.f, args.g))
    payload = {"u": u.tolist(), "config": _config(args), "barcodes": []}
    for k, h in enumerate(inputs):
        try:
            bc = projected_barcode(h, u)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        name = f"barcode_{k + 1}.csv"
        write_barcode_csv(bc, out / name)
        payload["barcodes"].append(name)
    if len(inputs) == 2:
        ev = UpsilonEvaluator(inputs[0], inputs[1], args.degrees)
        payload["value"] = _finite(ev(u), "upsilon")
    _write_json(out / "project.json", payload)
    return 0


def cmd_pipeline(args) -> int:
    """gen-dataset, build, ism and sliced in one go, plus a summary table."""
    out = _out_dir(args.out)
    t0 = time.perf_counter()
    common = ["--seed", str(args.seed)]
    rc = main(["gen-dataset", "--out", str(out), "--n", str(args.n), "--outliers", str(args.outliers)] + common)
    for name in ("X", "Y"):
        bw = [] if args.bandwidth is None else ["--bandwidth", str(args.bandwidth)]
        rc = rc or main(["build", str(out / f"{name}.csv"), "--grid", str(args.grid), "--out", str(out)] + bw)
    if rc:
        return rc
    f, g = _load_pair(str(out / "X.filt"), str(out / "Y.filt"))
    ev = UpsilonEvaluator(f, g, args.degrees)
    res = ism_gamma(f, g, _optimizer(args), evaluator=ev)
    sliced = _sliced_values(f, g, args, ev)
    _emit_curve(ev, out)
    table = {"ism": _finite(res.value, "ISM value"), "argmax": list(res.argmax.coords),
             "sliced": sliced, "evaluations": ev.evaluations,
             "seconds": time.perf_counter() - t0, "config": _config(args)}
    _write_json(out / "table.json", table)
    return 0


def _add_optimizer_flags(p) -> None:
    p.add_argument("--grid-points", type=int, default=201, help="simplex samples for n=2")
    p.add_argument("--grid-resolution", type=int, default=20, help="simplex grid denominator for n>=3")
    p.add_argument("--multistart", type=int, default=3)
    p.add_argument("--iterations", type=int, default=100)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=1e-4)


def _add_sliced_flags(p) -> None:
    p.add_argument("--p", type=int, nargs="+", default=[1, 2, 3, 4])
    p.add_argument("--normalization", choices=["paper", "mean"], default="paper")
    p.add_argument("--samples", type=int, default=2000, help="Monte Carlo samples for n>=3")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="projbar", description="Projected barcodes and projected distances.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-dataset", help="noisy circle X and X plus outliers Y")
    p.add_argument("--n", type=int, default=300)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--noise", type=float, default=0.1)
    p.add_argument("--outliers", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_gen_dataset)

    p = sub.add_parser("build", help="grid complex with the (distance, -density) bifiltration")
    p.add_argument("cloud")
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--box", type=float, nargs=2, default=[-1.0, 1.0], metavar=("LO", "HI"))
    p.add_argument("--bandwidth", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_build)

    for name, func, help_ in (("ism", cmd_ism, "gamma-linear ISM lower bound"),
                              ("sliced", cmd_sliced, "gamma-sliced distances"),
                              ("matching", cmd_matching, "sampled matching distance"),
                              ("project", cmd_project, "projected barcodes at one u")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("f")
        p.add_argument("g", nargs="?" if name == "project" else None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--degrees", type=_degrees, default=None, help="degree window P:Q")
        p.add_argument("--out", default=".")
        if name == "ism":
            _add_optimizer_flags(p)
        if name == "sliced":
            p.add_argument("--grid-points", type=int, default=201)
            _add_sliced_flags(p)
        if name == "matching":
            p.add_argument("--directions", type=int, default=10)
            p.add_argument("--offsets", type=int, default=10)
        if name == "project":
            p.add_argument("--u", type=float, nargs="+", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("pipeline", help="circle/density experiment end to end")
    p.add_argument("--n", type=int, default=300)
    p.add_argument("--outliers", type=int, default=10)
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--bandwidth", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--degrees", type=_degrees, default=None)
    p.add_argument("--out", default="pipeline_out")
    _add_optimizer_flags(p)
    _add_sliced_flags(p)
    p.set_defaults(func=cmd_pipeline)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"projbar: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericError, FloatingPointError, OverflowError) as exc:
        print(f"projbar: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, TypeError) as exc:
        print(f"projbar: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
