import json

import numpy as np

from twistconj import sun
from twistconj.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_alcove_flip(capsys):
    code, out = run(capsys, "alcove", "--group", "A2", "--twist", "flip")
    assert code == 0
    payload = json.loads(out)
    assert payload["dimension"] == 1
    assert payload["weyl_centralizer_order"] == 2
    offsets = sorted(h["offset"] for h in payload["halfspaces"])
    assert offsets == ["0", "1/2"]


def test_alcove_identity_triangle(capsys):
    code, out = run(capsys, "alcove", "--group", "A2", "--twist", "identity")
    assert code == 0
    payload = json.loads(out)
    assert payload["dimension"] == 2
    assert len(payload["halfspaces"]) == 3
    assert payload["weyl_centralizer_order"] == 6


def test_alcove_a3_flip(capsys):
    code, out = run(capsys, "alcove", "--group", "A3", "--twist", "flip")
    assert code == 0
    payload = json.loads(out)
    assert payload["dimension"] == 2
    assert len(payload["lattice_basis"]) == 2


def test_invalid_group_exit_code(capsys):
    assert main(["alcove", "--group", "Z9", "--twist", "flip"]) == 2


def test_fold_examples(capsys):
    code, out = run(capsys, "fold", "--group", "A2", "--twist", "flip", "--xi", "0.7")
    assert code == 0
    assert abs(json.loads(out)["folded_coords"][0] - 0.3) < 1e-12
    code, out = run(capsys, "fold", "--group", "A2", "--twist", "flip", "--xi=-1.2")
    assert abs(json.loads(out)["folded_coords"][0] - 0.2) < 1e-12


def test_project_identity(capsys, tmp_path):
    path = tmp_path / "id.json"
    path.write_text(json.dumps(sun.matrix_to_jsonable(np.eye(3, dtype=complex))))
    code, out = run(capsys, "project", "--group", "A2", "--twist", "flip", "--matrix", str(path))
    assert code == 0
    assert abs(json.loads(out)["coords"][0]) < 1e-12


def test_project_torus_point(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(sun.matrix_to_jsonable(sun.torus_exp([0.1, 0, -0.1]))))
    code, out = run(capsys, "project", "--group", "A2", "--twist", "flip", "--matrix", str(path))
    assert code == 0
    assert abs(json.loads(out)["coords"][0] - 0.2) < 1e-12


def test_project_rejects_non_unitary(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps([[[2.0, 0.0], [0, 0], [0, 0]],
                                [[0, 0], [1.0, 0], [0, 0]],
                                [[0, 0], [0, 0], [1.0, 0]]]))
    assert main(["project", "--group", "A2", "--twist", "flip", "--matrix", str(path)]) == 3


def test_sample_project_roundtrip(capsys, tmp_path):
    path = tmp_path / "sampled.json"
    code, out = run(capsys, "sample", "--group", "A2", "--twist", "flip",
                    "--s", "0.35", "--seed", "12", "--emit-matrix", str(path))
    assert code == 0
    code, out = run(capsys, "project", "--group", "A2", "--twist", "flip",
                    "--matrix", str(path), "--oracle")
    assert code == 0
    payload = json.loads(out)
    assert abs(payload["coords"][0] - 0.35) < 1e-8
    assert payload["oracle"] is None or payload["oracle"]["resolved"] is False or payload["oracle"]["agrees"]


def test_polytope_artifacts_and_manifest_rerun(capsys, tmp_path):
    outdir = tmp_path / "run1"
    args = ["polytope", "--group", "A2", "--twists", "flip,flip,identity",
            "--s", "0.4,0.1", "--samples", "300", "--refine", "8",
            "--budget", "150", "--seed", "33", "--out", str(outdir)]
    assert main(args) == 0
    capsys.readouterr()
    manifest = json.loads((outdir / "manifest.json").read_text())
    assert manifest["command"] == "polytope"
    assert (outdir / "cloud.csv").exists()
    assert (outdir / "hull.json").exists()
    assert (outdir / "overlay.svg").exists()
    assert (outdir / "overlay.png").exists()
    csv1 = (outdir / "cloud.csv").read_bytes()

    # rerun with the manifest's recorded configuration: byte-identical CSV
    outdir2 = tmp_path / "run2"
    cfg = manifest["config"]
    args2 = ["polytope", "--group", cfg["group"], "--twists", cfg["twists"],
             "--s", cfg["s"], "--samples", str(cfg["samples"]),
             "--refine", str(cfg["refine"]), "--budget", str(cfg["budget"]),
             "--seed", str(cfg["seed"]), "--out", str(outdir2)]
    assert main(args2) == 0
    capsys.readouterr()
    assert (outdir2 / "cloud.csv").read_bytes() == csv1


def test_polytope_empty_cloud_rejected(capsys):
    code = main(["polytope", "--group", "A2", "--twists", "flip,flip,identity",
                 "--s", "0.4,0.1", "--samples", "0", "--refine", "0"])
    assert code == 2


def test_polytope_svg_format(capsys, tmp_path):
    outdir = tmp_path / "svg"
    main(["polytope", "--group", "A2", "--twists", "flip,flip,identity",
          "--s", "0,0", "--samples", "200", "--refine", "0", "--seed", "1",
          "--out", str(outdir), "--no-figures"])
    capsys.readouterr()
    svg = (outdir / "overlay.svg").read_text()
    assert 'viewBox="0 0 600 600"' in svg
    assert "circle" in svg and "path" in svg


def test_membership_command(capsys):
    code, out = run(capsys, "membership", "--group", "A2", "--twists", "flip,flip,identity",
                    "--s", "0.5,0.5", "--xi", "0,0", "--seed", "4")
    assert code == 0
    payload = json.loads(out)
    assert payload["status"] == "member"
    assert payload["residual"] <= 1e-6


def test_horn_command(capsys):
    code, out = run(capsys, "horn", "--group", "A1", "--xi1", "0.3", "--xi2", "0.2",
                    "--samples", "20000", "--seed", "2")
    assert code == 0
    payload = json.loads(out)
    assert abs(payload["min_top"] - 0.1) < 0.01
    assert abs(payload["max_top"] - 0.5) < 0.01


def test_commutator_command(capsys, tmp_path):
    outdir = tmp_path / "comm"
    code, out = run(capsys, "commutator", "--group", "A2", "--samples", "200",
                    "--seed", "3", "--out", str(outdir))
    assert code == 0
    lines = (outdir / "commutator.csv").read_text().strip().split("\n")
    assert lines[0] == "worker,seed,coord1,coord2,refined"
    assert len(lines) == 201


def test_config_file_with_flag_override(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"xi": "0.7"}))
    code, out = run(capsys, "fold", "--group", "A2", "--twist", "flip", "--config", str(cfg))
    assert code == 0
    assert abs(json.loads(out)["folded_coords"][0] - 0.3) < 1e-12


def test_verify_quick_negative_control():
    # tampered reference must fail with the slice check named
    from twistconj.verify import check_slice_grid

    bad = check_slice_grid(samples=400, fan=6, refine_budget=100, master_seed=1,
                           workers=1, hausdorff_tol=0.05, tamper=True,
                           slice_values=(0.25,))
    assert not bad.passed
    assert bad.name == "slice_grid"
