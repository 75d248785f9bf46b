"""Acceptance suite: one test per criterion, at the stated tolerances.

Runs the full verification grid (the 25-slice reconstruction takes several
minutes); each test prints a single pass/fail line for the run log.
"""

import time

import pytest

from twistconj import verify


def report(name: str, passed: bool, detail: str = "") -> None:
    status = "PASS" if passed else "FAIL"
    print(f"ACCEPTANCE {name}: {status}{' - ' + detail if detail else ''}")


@pytest.fixture(scope="module")
def slice_grid():
    # criterion 6 grid, shared with criterion 7 and timed against its budget
    t0 = time.time()
    result = verify.check_slice_grid(master_seed=2024, progress=lambda s: print(s))
    result.details["wall_seconds"] = time.time() - t0
    return result


def test_criterion_1_twisted_alcove_exact():
    c = verify.check_alcove_exact()
    report("1 twisted-alcove-exactness", c.passed, f"{c.seconds:.2f}s")
    assert c.passed
    assert c.seconds < 1.0


def test_criterion_2_untwisted_reduction():
    c = verify.check_untwisted_reduction()
    report("2 untwisted-reduction", c.passed, f"{c.seconds:.2f}s")
    assert c.passed
    assert c.seconds < 10.0


def test_criterion_3_roundtrip_and_oracle():
    c = verify.check_roundtrip_oracle(trials=1000, oracle_cases=100, seed=2025)
    report(
        "3 class-projection-roundtrip", c.passed,
        f"worst {c.details['roundtrip_worst']:.2e}, oracle {c.details['oracle_resolved']} "
        f"resolved, disagreement {c.details['oracle_worst_disagreement']:.2e}, {c.seconds:.0f}s",
    )
    assert c.details["roundtrip_worst"] <= 1e-8
    assert c.details["oracle_resolved"] >= 100
    assert c.details["oracle_worst_disagreement"] <= 1e-6
    assert c.seconds < 120.0


def test_criterion_4_invariance_suite():
    c = verify.check_invariance(trials=1000, seed=2026)
    report(
        "4 invariance", c.passed,
        f"conj {c.details['worst_conjugation']:.2e}, central {c.details['worst_central']:.2e}",
    )
    assert c.details["worst_conjugation"] <= 1e-8
    assert c.details["worst_central"] <= 1e-8


def test_criterion_5_dimension_kernel():
    c = verify.check_kernel_dims(trials=200, seed=2027)
    report("5 dimension-kernel", c.passed, f"failures {c.details['failures']}/200")
    assert c.details["failures"] == 0


def test_criterion_6_slice_grid(slice_grid):
    worst_v = max(row["max_violation"] for row in slice_grid.details["slices"])
    worst_h = max(row["hausdorff"] for row in slice_grid.details["slices"])
    report(
        "6 slice-grid", slice_grid.passed,
        f"25 slices, worst violation {worst_v:.2e}, worst hausdorff {worst_h:.4f}, "
        f"{slice_grid.details['wall_seconds']:.0f}s",
    )
    assert len(slice_grid.details["slices"]) == 25
    assert worst_v <= 1e-7
    assert worst_h <= 0.02
    assert slice_grid.details["wall_seconds"] <= 15 * 60


def test_criterion_7_full_alcove(slice_grid):
    c = verify.check_full_alcove(slice_grid)
    report("7 full-alcove-slice", c.passed, f"hausdorff {c.details['hausdorff']:.4f}")
    assert c.details["hausdorff"] <= 0.02


def test_criterion_8_algebraic_identities():
    c = verify.check_identities(trials=100, seed=2028)
    report(
        "8 algebraic-identities", c.passed,
        f"chain {c.details['worst_chain']:.2e}, holonomy {c.details['worst_holonomy']:.2e}",
    )
    assert c.details["worst_chain"] <= 1e-11
    assert c.details["worst_holonomy"] <= 1e-11


def test_criterion_9_horn_baseline():
    c = verify.check_horn_su2(count=100_000, seed=2029, tol=0.01)
    report(
        "9 horn-baseline", c.passed,
        f"cloud [{c.details['min']:.4f}, {c.details['max']:.4f}] vs "
        f"oracle {c.details['oracle_interval']}, gap {c.details['max_gap']:.4f}",
    )
    assert c.passed


def test_criterion_10_convexity_midpoints():
    c = verify.check_convexity_midpoints(pairs=100, seed=2030, required=99)
    report(
        "10 convexity-midpoints", c.passed,
        f"{c.details['member_midpoints']}/100 certified",
    )
    assert c.details["member_midpoints"] >= 99


def test_criterion_11_reproducibility():
    c = verify.check_reproducibility(master_seed=2024)
    report("11 reproducibility", c.passed)
    assert c.passed
