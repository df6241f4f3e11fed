import json
import subprocess
import sys

import pytest

from cominimal.cli import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, main, read_config


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_geometric_6(capsys):
    code, out, _ = run(["classify", "--kind", "geometric", "--base", "6", "--dim", "1"], capsys)
    assert code == EXIT_PASS
    eligible = json.loads(out)["growth"]["eligible"]
    assert all(eligible[f"thm{i}"] for i in range(1, 8))


def test_classify_power_3(capsys):
    code, out, _ = run(["classify", "--kind", "power", "--base", "3"], capsys)
    eligible = json.loads(out)["growth"]["eligible"]
    assert eligible["thm7"] and not eligible["thm3"] and not eligible["thm6"]


def test_classify_custom_values(capsys):
    _, out, _ = run(["classify", "--values", "1,3,6,11"], capsys)
    growth = json.loads(out)["growth"]
    assert growth["failure_witness"] == [3, "11", "6"]
    _, out, _ = run(["classify", "--values", "1,3,11"], capsys)
    growth = json.loads(out)["growth"]
    # ratio exactly 3 at n = 1 fails the strict hypothesis only
    assert growth["holds_ge2"] and not growth["holds_gt3"]
    assert growth["witnesses"]["gt3"] == [1, "3", "1"]


def test_build_dumps(tmp_path, capsys):
    out = tmp_path / "e"
    assert main(["build", "--variant", "thm1", "--base", "4", "--n-max", "3", "--out", str(out)]) == 0
    assert (out / "E_2.txt").read_text() == "-7\n-6\n"
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["layers"]["2"] == {"file": "E_2.txt", "count": 2}
    assert (out / "manifest.json.meta.json").exists()
    g = tmp_path / "g"
    main(["build", "--variant", "thm3", "--base", "6", "--n-max", "3", "--out", str(g)])
    assert (g / "G_2.txt").read_text().split() == ["-36", "-12", "-11", "-10", "-9", "-8"]
    f = tmp_path / "f"
    main(["build", "--variant", "thm2", "--base", "4", "--out", str(f)])
    assert (f / "F_0.txt").read_text() == "-1\n"
    capsys.readouterr()


def test_build_2d_dump_format(tmp_path, capsys):
    out = tmp_path / "d2"
    assert main(["build", "--variant", "thm1", "--base", "6", "--dim", "2", "--n-max", "2", "--box", "-8,8", "--out", str(out)]) == 0
    lines = (out / "E_2.txt").read_text().splitlines()
    pts = [tuple(int(c) for c in ln.strip("()").split(",")) for ln in lines]
    assert pts == sorted(pts) and all(len(p) == 2 for p in pts)
    capsys.readouterr()


def test_verify_pass_and_refusal(tmp_path, capsys):
    code, out, _ = run(["verify", "--variant", "thm1", "--base", "4", "--window", "-64,64"], capsys)
    assert code == EXIT_PASS and json.loads(out)["status"] == "pass"
    code, _, _ = run(["verify", "--variant", "thm4", "--base", "4", "--window", "-64,64"], capsys)
    assert code == EXIT_PASS
    code, _, err = run(["verify", "--variant", "thm1", "--base", "2", "--window", "-64,64"], capsys)
    assert code == EXIT_FAIL and "refused" in err and "holds_gt3" in err


def test_verify_thm3_deletion_reports_failure(capsys):
    code, out, _ = run(["verify", "--variant", "thm3", "--base", "6", "--window", "-40,40"], capsys)
    body = json.loads(out)
    assert code == EXIT_FAIL and body["pair"]["uncovered"] == ["-3"]


def test_verify_suites(capsys):
    code, out, _ = run(
        ["verify", "--variant", "thm1", "--base", "4", "--window", "-64,64", "--prop-m", "--sum-bound", "50"], capsys
    )
    body = json.loads(out)
    assert code == 0 and body["sum_bound"]["violations"] == 0
    assert all(v == "pass" for part in body["prop_m"].values() for v in part.values())


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sequence\nkind = geometric\nbase = 6\ndim = 1\nvariant = thm7\nwindow = -36,36\n")
    assert read_config(cfg)["base"] == "6"
    code, out, _ = run(["verify", "--config", str(cfg)], capsys)
    assert code == 0 and json.loads(out)["variant"] == "thm7"
    code, out, _ = run(["verify", "--config", str(cfg), "--variant", "thm6"], capsys)
    assert json.loads(out)["variant"] == "thm6"
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert main(["classify", "--config", str(bad)]) == EXIT_USAGE


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify", "--variant", "thm9"])
    assert info.value.code == EXIT_USAGE
    assert main(["verify", "--variant", "thm1"]) == EXIT_USAGE  # no window
    assert main(["render", "--base", "6", "--dim", "1", "--window", "-4,4", "--out", "x.svg"]) == EXIT_USAGE
    assert main(["oracle", "--cap", "25"]) == EXIT_USAGE
    capsys.readouterr()


def test_render_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    for p in (a, b):
        assert main(["render", "--base", "6", "--dim", "2", "--window", "-40,40", "--sets", "W", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads((tmp_path / "a.json").read_text())["counts"] == {"W": 7}
    capsys.readouterr()


def test_render_layers_match_dumps(tmp_path, capsys):
    main(["build", "--variant", "thm3", "--base", "6", "--dim", "2", "--n-max", "2", "--box", "-20,20", "--out", str(tmp_path / "g")])
    main(["render", "--variant", "thm3", "--base", "6", "--dim", "2", "--n-max", "2", "--window", "-20,20",
          "--sets", "partner", "--by-layer", "--out", str(tmp_path / "g.svg")])
    counts = json.loads((tmp_path / "g.json").read_text())["counts"]
    for n in range(3):
        lines = (tmp_path / "g" / f"G_{n}.txt").read_text().splitlines()
        assert counts[f"G_{n}"] == len(lines)
    capsys.readouterr()


def test_render_empty_set(tmp_path, capsys):
    # T has no points in a window of negative coordinates
    assert main(["render", "--base", "6", "--dim", "2", "--window", "(-9,-9):(-1,-1)", "--sets", "T", "--out", str(tmp_path / "e.svg")]) == 0
    assert json.loads((tmp_path / "e.json").read_text())["counts"] == {"T": 0}
    capsys.readouterr()


def test_oracle_listing(capsys):
    code, out, _ = run(["oracle", "--moduli", "4", "--complements-of", "0,1"], capsys)
    assert code == 0 and [0, 2] in json.loads(out)["minimal_complements"]


def test_oracle_small_run(capsys):
    code, out, _ = run(["oracle", "--moduli", "1,2,3,4", "--random-modulus", "6", "--random-count", "3"], capsys)
    assert code == 0 and json.loads(out)["agreement"]


def test_report_files_are_byte_identical(tmp_path, capsys):
    for d in ("r1", "r2"):
        main(["verify", "--variant", "thm5", "--base", "4", "--window", "-64,64", "--out", str(tmp_path / d)])
    a = (tmp_path / "r1" / "verify.json").read_bytes()
    assert a == (tmp_path / "r2" / "verify.json").read_bytes()
    assert b"runtime" not in a
    assert b"runtime_s" in (tmp_path / "r1" / "verify.json.meta.json").read_bytes()
    capsys.readouterr()


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "cominimal", "classify", "--base", "4"], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["growth"]["holds_gt3"]
