"""Command line behavior: bundles, suites, exit codes, determinism."""

import json
import subprocess
import sys

import pytest

from cvqec import __version__
from cvqec.cli import main


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


# --- build-code ----------------------------------------------------------------


def test_build_writes_rot_bundle(tmp_path):
    out = tmp_path / "code.json"
    code = main(
        [
            "build-code", "--family", "rot", "--N", "2", "--D", "32",
            "--primitive", "fock:0,2", "--out", str(out),
        ]
    )
    assert code == 0
    bundle = json.loads(out.read_text())
    assert bundle["family"] == "rot" and bundle["N"] == 2 and bundle["D"] == 32
    assert bundle["tool_version"] == __version__
    assert bundle["eps"] is None
    assert len(bundle["codewords"]) == 2
    amps0 = bundle["codewords"][0]["entries"]
    assert amps0[0] == [1.0, 0.0] and all(a == [0.0, 0.0] for a in amps0[1:])


def test_build_writes_gkp_bundle(tmp_path):
    out = tmp_path / "code.json"
    assert main(["build-code", "--family", "gkp", "--N", "2", "--out", str(out)]) == 0
    bundle = json.loads(out.read_text())
    assert bundle["primitive"] == "ideal"
    desc = bundle["codewords"][1]
    assert desc["kind"] == "periodic"
    assert desc["offset"] == {"num": 2, "den": 1} and desc["period"] == 4


def test_build_windowed_gkp_label(tmp_path):
    out = tmp_path / "code.json"
    assert main(
        ["build-code", "--family", "gkp", "--N", "1", "--window", "2", "--out", str(out)]
    ) == 0
    bundle = json.loads(out.read_text())
    assert bundle["primitive"] == "window:2"
    assert bundle["codewords"][0]["kind"] == "finite"


def test_build_rejects_bad_requests(tmp_path, capsys):
    assert main(["build-code", "--family", "rot", "--N", "0"]) == 2
    assert main(["build-code", "--family", "rot", "--N", "2", "--D", "2"]) == 2
    assert main(["build-code", "--family", "rot", "--N", "2", "--primitive", "quux:3"]) == 2
    # primitive living in a single sector cannot seed both codewords
    assert main(["build-code", "--family", "rot", "--N", "2", "--primitive", "fock:0,4"]) == 2
    capsys.readouterr()


# --- check ----------------------------------------------------------------------


@pytest.fixture()
def rot_bundle(tmp_path):
    path = tmp_path / "rot.json"
    assert main(
        ["build-code", "--family", "rot", "--N", "2", "--D", "64", "--eps", "1e-3",
         "--out", str(path)]
    ) == 0
    return path


@pytest.fixture()
def gkp_bundle(tmp_path):
    path = tmp_path / "gkp.json"
    assert main(["build-code", "--family", "gkp", "--N", "2", "--out", str(path)]) == 0
    return path


def test_logical_suite_passes_on_ideal_rot(rot_bundle, capsys):
    code, report = run_json(capsys, ["check", "--code", str(rot_bundle), "--suite", "logical"])
    assert code == 0
    names = [r["name"] for r in report["results"]]
    assert names == [
        "logical_Z", "logical_S", "logical_T", "stabilizer_rotation", "logical_X", "logical_H",
    ]
    assert report["summary"]["failed"] == 0
    assert report["config"]["suite"] == "logical"


def test_detect_suite_flags_injected_undetectable(rot_bundle, capsys):
    code, report = run_json(
        capsys,
        ["check", "--code", str(rot_bundle), "--suite", "detect", "--inject-gamma", "2",
         "--samples", "2"],
    )
    assert code == 1
    by_name = {r["name"]: r for r in report["results"]}
    assert not by_name["detect_gamma_2_injected"]["pass"]
    assert by_name["detect_gamma_1"]["pass"]


def test_detect_suite_on_sparse_primitive_code(tmp_path, capsys):
    path = tmp_path / "sparse.json"
    assert main(
        ["build-code", "--family", "rot", "--N", "2", "--D", "32",
         "--primitive", "fock:0,2", "--out", str(path)]
    ) == 0
    code, report = run_json(capsys, ["check", "--code", str(path), "--suite", "detect"])
    assert code == 0
    # non-ideal codes skip the rotation rows
    assert all(r["name"].startswith("detect_gamma") for r in report["results"])


def test_gkp_logical_suite_is_exact(gkp_bundle, capsys):
    code, report = run_json(capsys, ["check", "--code", str(gkp_bundle), "--suite", "logical"])
    assert code == 0
    assert report["summary"] == {"total": 24, "passed": 24, "failed": 0}
    for r in report["results"]:
        expected = r["metrics"]["expected"]
        assert expected == "any global" or r["metrics"]["phase"] == expected


def test_gkp_detect_suite_is_refused(gkp_bundle, capsys):
    assert main(["check", "--code", str(gkp_bundle), "--suite", "detect"]) == 2
    err = capsys.readouterr().err
    assert "logical suite" in err


def test_check_missing_bundle_file(capsys):
    assert main(["check", "--code", "/no/such/bundle.json", "--suite", "logical"]) == 2
    capsys.readouterr()


def test_check_markdown_output(gkp_bundle, capsys):
    code = main(["check", "--code", str(gkp_bundle), "--suite", "logical", "--format", "md"])
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("|") and "Z_on_0" in out


# --- bridge and alg1 ---------------------------------------------------------------


def test_bridge_reports_exact_gates_and_series(capsys):
    code, report = run_json(
        capsys,
        ["bridge", "--N", "2", "--D", "24", "--hadamard-dim", "64",
         "--eps-series", "1e-1,1e-2"],
    )
    assert code == 0
    by_name = {r["name"]: r for r in report["results"]}
    for gate in ("Z", "S", "T", "X"):
        row = by_name[f"gate_{gate}"]
        assert row["pass"] and row["metrics"]["max_phase_diff"] == 0.0
    series = by_name["hadamard_series"]
    assert series["metrics"]["eps"] == [0.1, 0.01]
    assert series["metrics"]["dim"] == 64
    assert all(f >= 0.99 for f in series["metrics"]["fidelities"])


def test_bridge_rejects_out_of_range(capsys):
    assert main(["bridge", "--N", "0"]) == 2
    assert main(["bridge", "--N", "9"]) == 2
    assert main(["bridge", "--N", "4", "--D", "6"]) == 2
    capsys.readouterr()


def test_alg1_command_reports_certificate(capsys):
    code, report = run_json(capsys, ["alg1", "--D", "2", "--G", "2"])
    assert code == 0
    metrics = report["results"][0]["metrics"]
    assert metrics["union_ok"] and metrics["disjoint_ok"]
    assert metrics["dim"] == 8
    assert all(v == 0.0 for v in metrics["residuals"].values())


def test_alg1_size_guard(capsys):
    assert main(["alg1", "--D", "100", "--G", "100"]) == 2
    capsys.readouterr()


def test_unknown_command_exits_nonzero(capsys):
    assert main(["frobnicate"]) != 0
    capsys.readouterr()


# --- reproducibility -----------------------------------------------------------------


def test_reports_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["alg1", "--D", "3", "--G", "2", "--out"]
    assert main(argv + [str(a)]) == 0
    assert main(argv + [str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_bundles_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    base = ["build-code", "--family", "rot", "--N", "3", "--D", "48", "--eps", "1e-2"]
    assert main(base + ["--out", str(a)]) == 0
    assert main(base + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "cvqec.cli", "alg1", "--D", "1", "--G", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["summary"]["passed"] == 1
