"""The SU(3) verification grid: every check the package certifies, runnable
from the CLI (verify-su3) or from the acceptance test suite.

Each check returns a CheckResult with a stable name, a pass flag, and enough
detail to diagnose a failure from the report alone.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import __version__
from .alcove import alcove_equal
from .errors import InternalError
from .exact import vec
from .hull import polytope_compare, su3_reference_slice
from .rootsys import build_root_datum, untwisted_alcove
from .sampler import (
    cloud_csv_text,
    membership_test,
    midpoint_tuple,
    product_image_sample,
    product_problem,
    random_member_tuple,
    support_maximize,
    write_cloud_csv,
    horn_sum_sample,
)
from .sun import (
    ClassPoint,
    adjoint_twist_operator,
    change_twist_chain,
    class_form_kernel,
    class_point,
    class_point_oracle,
    derived_seed,
    haar_sample,
    holonomy_product_setup,
    torus_exp,
    twist_realization,
    twisted_conjugate,
)
from .twist import build_twisted_alcove, diagram_automorphism, named_permutation

SLICE_VALUES = (0.0, 0.1, 0.25, 0.4, 0.5)
FAN_SIZE = 200
SLICE_SAMPLES = 20_000
HAUSDORFF_TOL = 0.02
VIOLATION_TOL = 1e-7


@dataclass
class CheckResult:
    name: str
    passed: bool
    seconds: float
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "seconds": round(self.seconds, 3),
            "details": _jsonable(self.details),
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    return x


@lru_cache(maxsize=1)
def su3_env():
    """Shared SU(3) data: root datum, both twists, realizations, alcoves."""
    datum = build_root_datum("A", 2)
    tw_flip = diagram_automorphism(datum, named_permutation(datum, "flip"))
    tw_id = diagram_automorphism(datum, named_permutation(datum, "identity"))
    kappa = twist_realization(tw_flip)
    kid = twist_realization(tw_id)
    alc_tw = build_twisted_alcove(tw_flip)
    alc_0 = untwisted_alcove(datum)
    return datum, tw_flip, kappa, kid, alc_tw, alc_0


def twisted_point(s: float) -> ClassPoint:
    """The class point with invariant-pairing value s on the twisted line."""
    _, _, _, _, alc_tw, _ = su3_env()
    theta = np.array([s / 2.0, 0.0, -s / 2.0])
    return ClassPoint(coords=tuple(alc_tw.coords_of(theta)), theta=tuple(theta))


def _timed(fn):
    t0 = time.time()
    out = fn()
    return out, time.time() - t0


# ---------------------------------------------------------------------------
# Individual checks
# ---------------------------------------------------------------------------


def check_alcove_exact() -> CheckResult:
    """Twisted alcove of the flipped A2 equals {0 <= gamma pairing <= 1/2} exactly."""
    def run():
        _, _, _, _, alc_tw, _ = su3_env()
        expected = {
            (vec([-1, 0, 1]), Fraction(0)),
            (vec([1, 0, -1]), Fraction(1, 2)),
        }
        got = {(h.normal, h.offset) for h in alc_tw.halfspaces}
        return {"match": got == expected, "halfspaces": [[list(map(str, n)), str(c)] for n, c in sorted(got)]}
    out, dt = _timed(run)
    return CheckResult("alcove_exact", out["match"], dt, out)


def check_untwisted_reduction() -> CheckResult:
    """Identity-twist alcoves equal the standard alcoves exactly for A1, A2, A3, D4."""
    def run():
        results = {}
        for fam, rank in (("A", 1), ("A", 2), ("A", 3), ("D", 4)):
            datum = build_root_datum(fam, rank)
            tw = diagram_automorphism(datum, tuple(range(rank)))
            results[f"{fam}{rank}"] = alcove_equal(build_twisted_alcove(tw), untwisted_alcove(datum))
        return results
    out, dt = _timed(run)
    return CheckResult("untwisted_reduction", all(out.values()), dt, out)


def check_roundtrip_oracle(trials: int = 1000, oracle_cases: int = 100, seed: int = 101) -> CheckResult:
    """Class projection round trips at 1e-8 and oracle agreement at 1e-6."""
    def run():
        _, _, kappa, _, alc_tw, _ = su3_env()
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(trials):
            s = rng.random() * 0.5
            g = twisted_conjugate(haar_sample(3, rng), torus_exp([s / 2, 0, -s / 2]), kappa)
            cp = class_point(g, kappa, alc_tw)
            worst = max(worst, abs(cp.coords[0] - s))
        resolved = 0
        attempts = 0
        worst_oracle = 0.0
        while resolved < oracle_cases and attempts < 2 * oracle_cases:
            attempts += 1
            s = rng.random() * 0.5
            g = twisted_conjugate(haar_sample(3, rng), torus_exp([s / 2, 0, -s / 2]), kappa)
            res = class_point_oracle(g, kappa, alc_tw)
            if res.resolved:
                resolved += 1
                both = class_point(g, kappa, alc_tw)
                worst_oracle = max(worst_oracle, abs(res.point.coords[0] - both.coords[0]))
        return {
            "roundtrip_worst": worst,
            "oracle_resolved": resolved,
            "oracle_attempts": attempts,
            "oracle_worst_disagreement": worst_oracle,
        }
    out, dt = _timed(run)
    passed = (
        out["roundtrip_worst"] <= 1e-8
        and out["oracle_resolved"] >= min(oracle_cases, 100)
        and out["oracle_worst_disagreement"] <= 1e-6
    )
    return CheckResult("roundtrip_oracle", passed, dt, out)


def check_invariance(trials: int = 1000, seed: int = 202) -> CheckResult:
    """Projection invariance under twisted conjugation and central left multiplication."""
    def run():
        _, _, kappa, _, alc_tw, _ = su3_env()
        rng = np.random.default_rng(seed)
        central = np.exp(2j * np.pi / 3) * np.eye(3)
        worst_conj = 0.0
        worst_central = 0.0
        for _ in range(trials):
            g = haar_sample(3, rng)
            h = haar_sample(3, rng)
            base = class_point(g, kappa, alc_tw)
            moved = class_point(twisted_conjugate(h, g, kappa), kappa, alc_tw)
            worst_conj = max(worst_conj, abs(base.coords[0] - moved.coords[0]))
            shifted = class_point(central @ g.entries, kappa, alc_tw)
            worst_central = max(worst_central, abs(base.coords[0] - shifted.coords[0]))
        return {"worst_conjugation": worst_conj, "worst_central": worst_central}
    out, dt = _timed(run)
    passed = out["worst_conjugation"] <= 1e-8 and out["worst_central"] <= 1e-8
    return CheckResult("invariance", passed, dt, out)


def check_kernel_dims(trials: int = 200, seed: int = 303) -> CheckResult:
    """Generic twisted classes are 7-dimensional with matching 2-form kernels."""
    def run():
        _, _, kappa, _, _, _ = su3_env()
        rng = np.random.default_rng(seed)
        failures = 0
        warnings_seen = 0
        for _ in range(trials):
            s = 0.05 + 0.4 * rng.random()
            phi = twisted_conjugate(haar_sample(3, rng), torus_exp([s / 2, 0, -s / 2]), kappa)
            a = adjoint_twist_operator(phi, kappa)
            rank = int(np.sum(np.linalg.svd(a - np.eye(8), compute_uv=False) > 1e-9))
            try:
                kd = class_form_kernel(phi, kappa)
            except InternalError:
                failures += 1
                continue
            if rank != 7 or kd["dim_ker_omega"] != kd["dim_ker_AplusI"]:
                failures += 1
            if kd["tolerance_warning"]:
                warnings_seen += 1
        return {"failures": failures, "tolerance_warnings": warnings_seen, "trials": trials}
    out, dt = _timed(run)
    return CheckResult("kernel_dims", out["failures"] == 0, dt, out)


def _run_slice(s1: float, s2: float, samples: int, fan: int, refine_budget: int,
               master_seed: int, workers: int, tamper: bool):
    _, _, kappa, kid, alc_tw, alc_0 = su3_env()
    prob = product_problem([kappa, kappa, kid], [twisted_point(s1), twisted_point(s2)], alc_0)
    cloud = product_image_sample(prob, samples, master_seed=master_seed, workers=workers)
    for k in range(fan):
        phi = 2 * np.pi * (k + 0.5) / fan
        support_maximize(prob, cloud, (np.cos(phi), np.sin(phi)), budget=refine_budget)
    ref = su3_reference_slice(s1, s2)
    if tamper:
        shrunk = tuple(
            (0.7 * x + 0.15, 0.7 * y + 0.15) for x, y in ref.vertices
        )
        ref = type(ref)(vertices=shrunk, kind=ref.kind)
    comparison = polytope_compare(cloud, ref)
    return prob, cloud, ref, comparison


def check_slice_grid(
    samples: int = SLICE_SAMPLES,
    fan: int = FAN_SIZE,
    refine_budget: int = 500,
    master_seed: int = 2024,
    workers: int = 1,
    hausdorff_tol: float = HAUSDORFF_TOL,
    outdir=None,
    figures: bool = True,
    tamper: bool = False,
    progress=None,
    slice_values=SLICE_VALUES,
) -> CheckResult:
    """Reconstruct every (s1, s2) slice and compare against the reference polygon."""
    t0 = time.time()
    rows = []
    passed = True
    full_alcove_hausdorff = None
    for i, s1 in enumerate(slice_values):
        for j, s2 in enumerate(slice_values):
            seed = derived_seed(master_seed, 97 * i + j)
            _, cloud, ref, cmp_ = _run_slice(s1, s2, samples, fan, refine_budget, seed, workers, tamper)
            ok = cmp_["max_violation"] <= VIOLATION_TOL and cmp_["hausdorff"] <= hausdorff_tol
            passed &= ok
            if s1 == 0.0 and s2 == 0.0:
                full_alcove_hausdorff = cmp_["hausdorff"]
            row = {
                "s1": s1, "s2": s2, "seed": seed,
                "max_violation": cmp_["max_violation"],
                "hausdorff": cmp_["hausdorff"],
                "coverage": cmp_["coverage_fraction"],
                "passed": ok,
            }
            rows.append(row)
            if progress:
                progress(
                    f"  slice ({s1:.2f},{s2:.2f}): violation {cmp_['max_violation']:.2e} "
                    f"hausdorff {cmp_['hausdorff']:.4f} {'ok' if ok else 'FAIL'}"
                )
            if outdir is not None:
                # dots appear inside the stem, so extensions are appended, not substituted
                stem = str(Path(outdir) / f"slice_{s1:g}_{s2:g}")
                write_cloud_csv(cloud, stem + ".csv")
                from .plots import render_overlay_png, write_overlay_svg

                pts = cloud.coords_array()
                write_overlay_svg(stem + ".svg", ref, pts, cmp_["hull"],
                                  title=f"s1={s1:g} s2={s2:g}")
                if figures:
                    render_overlay_png(stem + ".png", ref, pts, cmp_["hull"],
                                       title=f"slice s1={s1:g}, s2={s2:g}")
    details = {"slices": rows, "full_alcove_hausdorff": full_alcove_hausdorff}
    return CheckResult("slice_grid", passed, time.time() - t0, details)


def check_full_alcove(slice_grid: CheckResult, hausdorff_tol: float = HAUSDORFF_TOL) -> CheckResult:
    """The (0, 0) slice covers the whole alcove."""
    h = slice_grid.details.get("full_alcove_hausdorff")
    ok = h is not None and h <= hausdorff_tol
    return CheckResult("full_alcove", ok, 0.0, {"hausdorff": h})


def check_identities(trials: int = 100, seed: int = 404) -> CheckResult:
    """Twist-change chains and holonomy closures hold to 1e-11, mixed twists included."""
    def run():
        _, _, kappa, kid, alc_tw, alc_0 = su3_env()
        rng = np.random.default_rng(seed)
        worst_chain = 0.0
        worst_holonomy = 0.0
        for t in range(trials):
            kaps = [kappa, kappa, kid] if t % 2 == 0 else [kappa, kid, kappa]
            hs = [haar_sample(3, rng) for _ in range(3)]
            a_s = [haar_sample(3, rng) for _ in range(3)]
            out = change_twist_chain(a_s, kaps, hs)
            worst_chain = max(worst_chain, out["residual"])
            ds = [haar_sample(3, rng) for _ in range(2)]
            cs = [haar_sample(3, rng) for _ in range(2)]
            alcs = [alc_tw if k.order == 2 else alc_0 for k in kaps]
            out2 = holonomy_product_setup(kaps, ds, cs, alcoves=alcs if t % 10 == 0 else None)
            worst_holonomy = max(worst_holonomy, out2["residual"])
        return {"worst_chain": worst_chain, "worst_holonomy": worst_holonomy}
    out, dt = _timed(run)
    passed = out["worst_chain"] <= 1e-11 and out["worst_holonomy"] <= 1e-11
    return CheckResult("identities", passed, dt, out)


def check_horn_su2(count: int = 100_000, seed: int = 505, tol: float = 0.01) -> CheckResult:
    """Two-orbit Hermitian sum on su(2) fills the triangle-inequality interval."""
    def run():
        datum = build_root_datum("A", 1)
        a, b = 0.3, 0.2
        spectra = horn_sum_sample(datum, [np.array([a, -a]), np.array([b, -b])], count, master_seed=seed)
        xs = np.sort(spectra[:, 0])
        # independent oracle: scan the relative angle between the two spectra
        angles = np.linspace(0, np.pi, 10_001)
        tops = np.sqrt(a * a + b * b + 2 * a * b * np.cos(angles))
        lo, hi = tops.min(), tops.max()
        gap = float(np.max(np.diff(xs))) if len(xs) > 1 else np.inf
        return {
            "min": float(xs[0]), "max": float(xs[-1]),
            "oracle_interval": [float(lo), float(hi)],
            "max_gap": gap,
            "outside": float(max(xs[-1] - hi, lo - xs[0], 0.0)),
        }
    out, dt = _timed(run)
    lo, hi = out["oracle_interval"]
    passed = (
        abs(out["min"] - lo) <= tol
        and abs(out["max"] - hi) <= tol
        and out["max_gap"] <= tol
        and out["outside"] <= 1e-9
    )
    return CheckResult("horn_su2", passed, dt, out)


def check_convexity_midpoints(pairs: int = 100, seed: int = 606, required: int = 99) -> CheckResult:
    """Midpoints of certified member tuples certify as members (one-sided)."""
    def run():
        _, _, kappa, kid, alc_tw, alc_0 = su3_env()
        rng = np.random.default_rng(seed)
        kaps = [kappa, kappa, kid]
        alcs = [alc_tw, alc_tw, alc_0]
        hits = 0
        residuals = []
        for _ in range(pairs):
            ta, ra = random_member_tuple(kaps, alcs[:2], alc_0, rng)
            tb, rb = random_member_tuple(kaps, alcs[:2], alc_0, rng)
            if max(ra, rb) > 1e-9:
                continue
            mid = midpoint_tuple(ta, tb, alcs)
            res = membership_test(mid, kaps, budget=2000, restarts=8, seed=int(rng.integers(2**31)))
            residuals.append(res.residual)
            if res.member:
                hits += 1
        return {"member_midpoints": hits, "pairs": pairs,
                "worst_residual": float(max(residuals)) if residuals else None}
    out, dt = _timed(run)
    return CheckResult("convexity_midpoints", out["member_midpoints"] >= required, dt, out)


def check_reproducibility(samples: int = 2000, fan: int = 20, master_seed: int = 2024,
                          workers: int = 2) -> CheckResult:
    """Identical seed and worker count give byte-identical cloud CSV text."""
    def run():
        def make():
            _, cloud, _, _ = _run_slice(0.4, 0.1, samples, fan, 300, master_seed, workers, False)
            return cloud_csv_text(cloud)
        return {"identical": make() == make()}
    out, dt = _timed(run)
    return CheckResult("reproducibility", out["identical"], dt, out)


# ---------------------------------------------------------------------------
# Full grid
# ---------------------------------------------------------------------------


def run_verify_su3(
    quick: bool = False,
    master_seed: int = 2024,
    workers: int = 1,
    outdir=None,
    figures: bool = True,
    tamper: bool = False,
    progress=None,
) -> dict:
    """Run the whole verification grid; returns the machine-readable report."""
    t0 = time.time()
    say = progress or (lambda s: None)
    if outdir is not None:
        Path(outdir).mkdir(parents=True, exist_ok=True)

    if quick:
        grid_kwargs = dict(samples=4000, fan=60, refine_budget=350, hausdorff_tol=0.05,
                           slice_values=(0.0, 0.25, 0.5))
        counts = dict(roundtrip=200, oracle=20, invariance=200, kernel=50,
                      identities=25, horn=20000, pairs=20, required=18)
    else:
        grid_kwargs = dict(samples=SLICE_SAMPLES, fan=FAN_SIZE, refine_budget=500,
                           hausdorff_tol=HAUSDORFF_TOL, slice_values=SLICE_VALUES)
        counts = dict(roundtrip=1000, oracle=100, invariance=1000, kernel=200,
                      identities=100, horn=100_000, pairs=100, required=99)

    checks: list[CheckResult] = []

    def add(c: CheckResult):
        checks.append(c)
        say(f"[{'pass' if c.passed else 'FAIL'}] {c.name} ({c.seconds:.1f}s)")

    add(check_alcove_exact())
    add(check_untwisted_reduction())
    add(check_roundtrip_oracle(trials=counts["roundtrip"], oracle_cases=counts["oracle"],
                               seed=derived_seed(master_seed, 1)))
    add(check_invariance(trials=counts["invariance"], seed=derived_seed(master_seed, 2)))
    add(check_kernel_dims(trials=counts["kernel"], seed=derived_seed(master_seed, 3)))
    slice_grid = check_slice_grid(master_seed=master_seed, workers=workers, outdir=outdir,
                                  figures=figures, tamper=tamper, progress=say, **grid_kwargs)
    add(slice_grid)
    add(check_full_alcove(slice_grid, hausdorff_tol=grid_kwargs["hausdorff_tol"]))
    add(check_identities(trials=counts["identities"], seed=derived_seed(master_seed, 4)))
    add(check_horn_su2(count=counts["horn"], seed=derived_seed(master_seed, 5)))
    add(check_convexity_midpoints(pairs=counts["pairs"], seed=derived_seed(master_seed, 6),
                                  required=counts["required"]))
    add(check_reproducibility(master_seed=master_seed))

    report = {
        "package_version": __version__,
        "quick": quick,
        "master_seed": master_seed,
        "workers": workers,
        "tampered_reference": tamper,
        "passed": all(c.passed for c in checks),
        "elapsed_seconds": round(time.time() - t0, 1),
        "checks": [c.to_json() for c in checks],
    }
    return report


def summarize(report: dict) -> str:
    lines = [
        f"verify-su3 report (version {report['package_version']}, "
        f"seed {report['master_seed']}, {'quick' if report['quick'] else 'full'} mode)"
    ]
    for c in report["checks"]:
        lines.append(f"  [{'pass' if c['passed'] else 'FAIL'}] {c['name']:24s} {c['seconds']:8.1f}s")
    lines.append(f"overall: {'pass' if report['passed'] else 'FAIL'} "
                 f"in {report['elapsed_seconds']}s")
    return "\n".join(lines)
