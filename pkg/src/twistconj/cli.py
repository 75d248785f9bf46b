"""Command-line interface: alcove/projection queries, polytope reconstruction
runs with figure and CSV artifacts, and the SU(3) verification grid.

Exit codes: 0 success, 1 verification failure, 2 configuration or schema
error, 3 bad input data, 4 numeric-resolution breach.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    ConfigurationError,
    InputDataError,
    NumericError,
    TwistConjError,
    ValidationError,
)
from .hull import hull_2d, polytope_compare, su3_reference_slice
from .rootsys import build_root_datum
from .alcove import fold_to_twisted_alcove
from .sampler import (
    product_image_sample,
    product_problem,
    membership_test,
    support_maximize,
    twisted_commutator_sample,
    horn_sum_sample,
    write_cloud_csv,
)
from .sun import (
    ClassPoint,
    class_point,
    class_point_oracle,
    haar_sample,
    matrix_from_jsonable,
    matrix_to_jsonable,
    torus_exp,
    twist_realization,
    twisted_conjugate,
)
from .twist import build_twisted_alcove, diagram_automorphism, named_permutation
from .verify import run_verify_su3, summarize


def _f17(x: float) -> str:
    return f"{float(x):.17g}"


def _float_list(xs) -> str:
    return "[" + ", ".join(_f17(x) for x in xs) + "]"


def _parse_group(spec: str):
    spec = spec.strip()
    if len(spec) < 2 or spec[0] not in "AD":
        raise ConfigurationError(f"group must look like A2 or D4, got {spec!r}")
    try:
        rank = int(spec[1:])
    except ValueError as exc:
        raise ConfigurationError(f"bad rank in group {spec!r}") from exc
    return build_root_datum(spec[0], rank)


def _twist_data(datum, name: str):
    return diagram_automorphism(datum, named_permutation(datum, name))


def _load_config(args):
    if getattr(args, "config", None):
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config file: {exc}") from exc
        if not isinstance(cfg, dict):
            raise ConfigurationError("config file must hold a JSON object")
        for key, value in cfg.items():
            attr = key.replace("-", "_")
            if hasattr(args, attr) and getattr(args, attr) is None:
                setattr(args, attr, value)
    return args


def _write_manifest(outdir: Path, command: str, config: dict, seconds: float, artifacts: list[str]):
    manifest = {
        "command": command,
        "config": config,
        "package_version": __version__,
        "numpy_version": np.__version__,
        "seconds": round(seconds, 2),
        "artifacts": artifacts,
    }
    path = outdir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_alcove(args) -> int:
    datum = _parse_group(args.group)
    tw = _twist_data(datum, args.twist)
    alc = build_twisted_alcove(tw)
    payload = alc.to_json()
    payload["group"] = args.group
    payload["twist"] = args.twist
    payload["weyl_centralizer_order"] = len(tw.weyl_centralizer)
    print(json.dumps(payload, indent=2))
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "alcove.json").write_text(json.dumps(payload, indent=2) + "\n")
    return 0


def cmd_project(args) -> int:
    if not args.matrix:
        raise ConfigurationError("project needs --matrix (flag or config)")
    datum = _parse_group(args.group)
    tw = _twist_data(datum, args.twist)
    kappa = twist_realization(tw)
    alc = build_twisted_alcove(tw)
    try:
        data = json.loads(Path(args.matrix).read_text())
        u = matrix_from_jsonable(data)
    except (OSError, json.JSONDecodeError, ValidationError) as exc:
        raise InputDataError(f"bad matrix file: {exc}") from exc
    cp = class_point(u, kappa, alc)
    oracle_line = "null"
    if args.oracle:
        res = class_point_oracle(u, kappa, alc)
        if res.resolved:
            agree = max(abs(a - b) for a, b in zip(res.point.coords, cp.coords)) <= 1e-6
            oracle_line = json.dumps({"resolved": True, "agrees": bool(agree),
                                      "residual": float(res.residual)})
        else:
            oracle_line = json.dumps({"resolved": False, "residual": float(res.residual)})
    print(
        "{"
        f'"coords": {_float_list(cp.coords)}, '
        f'"theta": {_float_list(cp.theta)}, '
        f'"oracle": {oracle_line}'
        "}"
    )
    return 0


def cmd_fold(args) -> int:
    if args.xi is None:
        raise ConfigurationError("fold needs --xi (flag or config)")
    datum = _parse_group(args.group)
    tw = _twist_data(datum, args.twist)
    alc = build_twisted_alcove(tw)
    coords = [float(x) for x in str(args.xi).split(",")]
    if len(coords) != alc.dimension:
        raise ConfigurationError(f"expected {alc.dimension} chart coordinates")
    theta = alc.theta_of(coords)
    folded, count = fold_to_twisted_alcove(alc, theta)
    print(
        "{"
        f'"input_coords": {_float_list(coords)}, '
        f'"folded_coords": {_float_list(alc.coords_of(folded))}, '
        f'"reflections": {count}'
        "}"
    )
    return 0


def _su3_problem(args):
    datum = _parse_group(args.group)
    twists = [t.strip() for t in args.twists.split(",")]
    if len(twists) < 2:
        raise ConfigurationError("need at least two twists")
    svals = [float(x) for x in str(args.s).split(",")] if args.s else []
    if len(svals) != len(twists) - 1:
        raise ConfigurationError("need one s parameter per fixed factor")
    tws = [_twist_data(datum, t) for t in twists]
    kappas = [twist_realization(t) for t in tws]
    alcs = [build_twisted_alcove(t) for t in tws]
    fixed = []
    for s, kap, alc in zip(svals, kappas[:-1], alcs[:-1]):
        if kap.order != 2 or datum.rank != 2:
            raise ConfigurationError("fixed factors must be A2 twisted classes, parametrized by s")
        if not 0.0 <= s <= 0.5:
            raise ConfigurationError("twisted class parameters live in [0, 1/2]")
        theta = np.array([s / 2.0, 0.0, -s / 2.0])
        fixed.append(ClassPoint(coords=tuple(alc.coords_of(theta)), theta=tuple(theta)))
    return product_problem(kappas, fixed, alcs[-1]), alcs


def cmd_polytope(args) -> int:
    t0 = time.time()
    seed = int(args.seed if args.seed is not None else 0)
    workers = int(args.workers if args.workers is not None else 1)
    samples = int(args.samples if args.samples is not None else 20000)
    refine = int(args.refine if args.refine is not None else 200)
    budget = int(args.budget if args.budget is not None else 500)
    prob, _ = _su3_problem(args)
    cloud = product_image_sample(prob, samples, master_seed=seed, workers=workers)
    if not cloud.points:
        raise ValidationError("empty cloud: no samples requested or all failed")
    for k in range(refine):
        phi = 2 * np.pi * (k + 0.5) / max(refine, 1)
        support_maximize(prob, cloud, (np.cos(phi), np.sin(phi)), budget=budget)
    pts = cloud.coords_array()
    sampled = hull_2d(pts)
    report = {
        "samples": len(cloud.points),
        "failures": cloud.failures,
        "hull": {
            "vertices": [list(v) for v in sampled.vertices],
            "halfspaces": [
                {"normal": list(n), "offset": c} for n, c in sampled.halfspaces
            ],
        },
    }
    svals = [float(x) for x in str(args.s).split(",")]
    reference = None
    if args.group == "A2" and args.twists == "flip,flip,identity":
        reference = su3_reference_slice(svals[0], svals[1])
        cmp_ = polytope_compare(cloud, reference)
        report["reference_comparison"] = {
            "max_violation": cmp_["max_violation"],
            "hausdorff": cmp_["hausdorff"],
            "coverage_fraction": cmp_["coverage_fraction"],
        }
    artifacts = []
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        write_cloud_csv(cloud, outdir / "cloud.csv")
        (outdir / "problem.json").write_text(
            json.dumps({**prob.descriptor(), "hash": prob.descriptor_hash()}, indent=2) + "\n"
        )
        (outdir / "hull.json").write_text(json.dumps(report, indent=2) + "\n")
        artifacts = ["cloud.csv", "problem.json", "hull.json"]
        if reference is not None:
            from .plots import render_overlay_png, write_overlay_svg

            write_overlay_svg(outdir / "overlay.svg", reference, pts, sampled,
                              title=f"s={args.s}")
            artifacts.append("overlay.svg")
            if not args.no_figures:
                render_overlay_png(outdir / "overlay.png", reference, pts, sampled,
                                   title=f"product slice s=({args.s})")
                artifacts.append("overlay.png")
        config = {
            "group": args.group, "twists": args.twists, "s": args.s,
            "samples": samples, "refine": refine, "budget": budget,
            "seed": seed, "workers": workers,
        }
        _write_manifest(outdir, "polytope", config, time.time() - t0, artifacts)
    print(json.dumps(report, indent=2))
    return 0


def cmd_membership(args) -> int:
    if args.xi is None:
        raise ConfigurationError("membership needs --xi (flag or config)")
    datum = _parse_group(args.group)
    twists = [t.strip() for t in args.twists.split(",")]
    tws = [_twist_data(datum, t) for t in twists]
    kappas = [twist_realization(t) for t in tws]
    alcs = [build_twisted_alcove(t) for t in tws]
    svals = [float(x) for x in str(args.s).split(",")]
    if len(svals) != len(twists) - 1:
        raise ConfigurationError("need one s value per leading factor")
    xi = [float(x) for x in str(args.xi).split(",")]
    if len(xi) != alcs[-1].dimension:
        raise ConfigurationError(f"xi needs {alcs[-1].dimension} chart coordinates")
    pts = []
    for s, alc, kap in zip(svals, alcs[:-1], kappas[:-1]):
        if kap.order != 2 or datum.rank != 2:
            raise ConfigurationError("membership CLI covers A2 twisted leading factors")
        if not 0.0 <= s <= 0.5:
            raise ConfigurationError("twisted class parameters live in [0, 1/2]")
        theta = np.array([s / 2, 0, -s / 2])
        pts.append(ClassPoint(coords=tuple(alc.coords_of(theta)), theta=tuple(theta)))
    theta_last = alcs[-1].theta_of(xi)
    folded, _ = fold_to_twisted_alcove(alcs[-1], theta_last)
    pts.append(ClassPoint(coords=tuple(alcs[-1].coords_of(folded)), theta=tuple(folded)))
    budget = int(args.budget if args.budget is not None else 2000)
    restarts = int(args.restarts if args.restarts is not None else 8)
    res = membership_test(pts, kappas, budget=budget, restarts=restarts,
                          seed=int(args.seed if args.seed is not None else 0))
    print(json.dumps({
        "status": "member" if res.member else "unresolved",
        "residual": res.residual,
    }, indent=2))
    return 0


def cmd_horn(args) -> int:
    if args.xi1 is None or args.xi2 is None:
        raise ConfigurationError("horn needs --xi1 and --xi2 (flags or config)")
    datum = _parse_group(args.group)
    n = datum.rank + 1

    def parse_xi(text):
        vals = [float(x) for x in str(text).split(",")]
        if len(vals) == 1 and n == 2:
            vals = [vals[0], -vals[0]]
        if len(vals) != n:
            raise ConfigurationError(f"spectrum needs {n} entries")
        return np.array(vals)

    xi1, xi2 = parse_xi(args.xi1), parse_xi(args.xi2)
    samples = int(args.samples if args.samples is not None else 100000)
    seed = int(args.seed if args.seed is not None else 0)
    spectra = horn_sum_sample(datum, [xi1, xi2], samples, master_seed=seed)
    payload = {
        "samples": samples,
        "min_top": float(spectra[:, 0].min()),
        "max_top": float(spectra[:, 0].max()),
    }
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        header = ",".join(f"lambda{i + 1}" for i in range(n))
        with open(outdir / "horn.csv", "w", newline="") as fh:
            fh.write(header + "\n")
            for row in spectra:
                fh.write(",".join(_f17(x) for x in row) + "\n")
        _write_manifest(outdir, "horn", {
            "group": args.group, "xi1": args.xi1, "xi2": args.xi2,
            "samples": samples, "seed": seed,
        }, 0.0, ["horn.csv"])
    print(json.dumps(payload, indent=2))
    return 0


def cmd_commutator(args) -> int:
    datum = _parse_group(args.group)
    tw = _twist_data(datum, "flip")
    kappa = twist_realization(tw)
    samples = int(args.samples if args.samples is not None else 10000)
    seed = int(args.seed if args.seed is not None else 0)
    workers = int(args.workers if args.workers is not None else 1)
    cloud = twisted_commutator_sample(kappa, samples, master_seed=seed, workers=workers)
    cloud.check_slack()
    payload = {"samples": len(cloud.points), "failures": cloud.failures}
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        write_cloud_csv(cloud, outdir / "commutator.csv")
        _write_manifest(outdir, "commutator", {
            "group": args.group, "samples": samples, "seed": seed, "workers": workers,
        }, 0.0, ["commutator.csv"])
    print(json.dumps(payload, indent=2))
    return 0


def cmd_sample(args) -> int:
    datum = _parse_group(args.group)
    tw = _twist_data(datum, args.twist)
    kappa = twist_realization(tw)
    alc = build_twisted_alcove(tw)
    if datum.rank != 2 or kappa.order != 2:
        raise ConfigurationError("sample emits A2 twisted class elements")
    s = float(args.s if args.s is not None else 0.25)
    if not 0.0 <= s <= 0.5:
        raise ConfigurationError("twisted class parameters live in [0, 1/2]")
    seed = int(args.seed if args.seed is not None else 0)
    rng = np.random.default_rng(seed)
    g = twisted_conjugate(haar_sample(3, rng), torus_exp([s / 2, 0, -s / 2]), kappa)
    cp = class_point(g, kappa, alc)
    if args.emit_matrix:
        Path(args.emit_matrix).write_text(json.dumps(matrix_to_jsonable(g)) + "\n")
    print("{" + f'"coords": {_float_list(cp.coords)}, "s": {_f17(s)}' + "}")
    return 0


def cmd_verify_su3(args) -> int:
    if args.manifest:
        try:
            manifest = json.loads(Path(args.manifest).read_text())
            cfg = manifest["config"]
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            raise ConfigurationError(f"cannot read manifest: {exc}") from exc
        quick = bool(cfg.get("quick", False))
        seed = int(cfg.get("seed", 2024))
        workers = int(cfg.get("workers", 1))
    else:
        quick = bool(args.quick)
        seed = int(args.seed if args.seed is not None else 2024)
        workers = int(args.workers if args.workers is not None else 1)
    t0 = time.time()
    outdir = Path(args.out) if args.out else None
    report = run_verify_su3(
        quick=quick,
        master_seed=seed,
        workers=workers,
        outdir=outdir,
        figures=not args.no_figures,
        progress=lambda s: print(s, file=sys.stderr),
    )
    print(summarize(report))
    if outdir is not None:
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
        _write_manifest(outdir, "verify-su3",
                        {"quick": quick, "seed": seed, "workers": workers},
                        time.time() - t0,
                        ["report.json"])
    return 0 if report["passed"] else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twistconj",
        description="Twisted-conjugation invariants and product-class polytopes",
    )
    parser.add_argument("--version", action="version", version=f"twistconj {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file; explicit flags win")
        p.add_argument("--out", help="output directory for artifacts")
        p.add_argument("--seed", type=int, default=None, help="master seed")

    p = sub.add_parser("alcove", help="twisted alcove H-representation and lattice")
    common(p)
    p.add_argument("--group", default="A2")
    p.add_argument("--twist", default="flip", choices=["identity", "flip"])
    p.set_defaults(func=cmd_alcove)

    p = sub.add_parser("project", help="class point of a matrix file")
    common(p)
    p.add_argument("--group", default="A2")
    p.add_argument("--twist", default="flip", choices=["identity", "flip"])
    p.add_argument("--matrix", help="JSON file of [re, im] pairs")
    p.add_argument("--oracle", action="store_true", help="cross-check with the search oracle")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("fold", help="fold a chart point into the alcove")
    common(p)
    p.add_argument("--group", default="A2")
    p.add_argument("--twist", default="flip", choices=["identity", "flip"])
    p.add_argument("--xi", help="comma-separated chart coordinates")
    p.set_defaults(func=cmd_fold)

    p = sub.add_parser("polytope", help="sample a product-class slice and build its hull")
    common(p)
    p.add_argument("--group", default="A2")
    p.add_argument("--twists", default="flip,flip,identity")
    p.add_argument("--s", default="0.4,0.1", help="fixed class parameters")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--refine", type=int, default=None, help="support-refinement fan size")
    p.add_argument("--budget", type=int, default=None, help="evaluations per refinement")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_polytope)

    p = sub.add_parser("membership", help="one-sided membership certification of a tuple")
    common(p)
    p.add_argument("--group", default="A2")
    p.add_argument("--twists", default="flip,flip,identity")
    p.add_argument("--s", default="0.4,0.1")
    p.add_argument("--xi", help="target chart coordinates")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--restarts", type=int, default=None)
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("verify-su3", help="run the full SU(3) verification grid")
    common(p)
    p.add_argument("--quick", action="store_true", help="reduced counts, relaxed Hausdorff")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--manifest", help="rerun from a previous manifest")
    p.set_defaults(func=cmd_verify_su3)

    p = sub.add_parser("horn", help="Hermitian-sum spectra baseline sampler")
    common(p)
    p.add_argument("--group", default="A1")
    p.add_argument("--xi1")
    p.add_argument("--xi2")
    p.add_argument("--samples", type=int, default=None)
    p.set_defaults(func=cmd_horn)

    p = sub.add_parser("commutator", help="twisted commutator image sampler")
    common(p)
    p.add_argument("--group", default="A2")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_commutator)

    p = sub.add_parser("sample", help="emit a random element of a twisted class")
    common(p)
    p.add_argument("--group", default="A2")
    p.add_argument("--twist", default="flip", choices=["identity", "flip"])
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--emit-matrix", help="write the sampled matrix to this JSON file")
    p.set_defaults(func=cmd_sample)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _load_config(args)
    try:
        return args.func(args)
    except InputDataError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 3
    except NumericError as exc:
        print(f"numeric resolution error: {exc}", file=sys.stderr)
        return 4
    except (ConfigurationError, ValidationError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except TwistConjError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
