import json
import subprocess
import sys

import pytest

from sensobs.cli import run
from sensobs.presets import baxter_poses

ARBITRARY = ",".join(str(v) for v in baxter_poses()["arbitrary"])


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_extended_planar(capsys):
    code, out, _ = invoke(capsys, "analyze", "--robot", "planar2r", "--sensors", "planar2r-torque", "--q", "0,0")
    assert code == 0
    fields = dict(line.split(None, 1) for line in out.splitlines())
    assert fields["s_fx"] == "0" and fields["o"] == "0"
    assert "fx" in fields["flags"].split()


def test_json_mirrors_text(capsys):
    args = ["analyze", "--robot", "baxter-like", "--sensors", "baxter-like-mixed", "--q", ARBITRARY]
    _, text, _ = invoke(capsys, *args)
    _, js, _ = invoke(capsys, *args, "--format", "json")
    rep = json.loads(js)
    assert list(rep) == [line.split(None, 1)[0] for line in text.splitlines()]


def test_csv_report(capsys):
    code, out, _ = invoke(capsys, "classify", "--robot", "baxter-like", "--sensors", "baxter-like-ft6",
                          "--q", ARBITRARY, "--format", "csv")
    header, row = out.splitlines()
    rep = dict(zip(header.split(","), row.split(",")))
    assert code == 0 and rep["jt_nullspace_dim"] == "0"


def test_classify_six_axes_nonsingular(capsys):
    code, out, _ = invoke(capsys, "classify", "--robot", "baxter-like", "--sensors", "baxter-like-ft6",
                          "--q", ARBITRARY, "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert not (rep["kinematic_singular"] or rep["observability_singular"]
                or rep["false_observability_singularity"])


def test_special_case_exit_codes(capsys):
    code, out, _ = invoke(capsys, "special-case", "--robot", "planar3r", "--q", "0.1,0.2,0.3", "--format", "json")
    assert code == 0 and json.loads(out)["max_deviation"] <= 1e-12
    code, _, err = invoke(capsys, "special-case", "--robot", "gantry", "--q", "0,0,0,0,0,0")
    assert code == 2 and "prismatic" in err


def test_sweep_min_o_max_at_singular_waypoint(capsys, tmp_path):
    out_file = tmp_path / "pass.csv"
    code, _, _ = invoke(capsys, "sweep", "--scenario", "baxter-singular-pass", "--out", str(out_file))
    assert code == 0
    lines = out_file.read_text().splitlines()
    header = lines[0].split(",")
    rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
    col = header.index("o_max")
    t_min = min(rows, key=lambda r: r[col])[0]
    assert t_min == 4.0


def test_sweep_emphasis_column(capsys):
    code, out, _ = invoke(capsys, "sweep", "--scenario", "baxter-singular-pass", "--sample-rate", "2",
                          "--wk-emphasis", "8")
    assert code == 0
    assert out.splitlines()[0].endswith(",wk_display")
    assert len(out.splitlines()) == 1 + 25


@pytest.mark.parametrize("argv, needle", [
    (["analyze", "--robot", "planar2r", "--q", "0,0"], "--sensors"),
    (["analyze", "--robot", "planar2r", "--sensors", "planar2r-torque", "--q", "0"], "--q"),
    (["analyze", "--robot", "planar2r", "--sensors", "planar2r-torque", "--q", "0,x"], "--q"),
    (["analyze", "--robot", "nobot", "--sensors", "planar2r-torque", "--q", "0,0"], "robot"),
    (["analyze", "--robot", "planar2r", "--sensors", "planar2r-torque", "--q", "0,0", "--threshold", "-1"],
     "--threshold"),
    (["classify", "--robot", "planar2r", "--sensors", "baxter-like-ft6", "--q", "0,0"], "parent joint"),
    (["sweep"], "--scenario"),
])
def test_input_errors_exit_1(capsys, argv, needle):
    code, out, err = invoke(capsys, *argv)
    assert code == 1 and needle in err and out == ""


def test_usage_error_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["analyze", "--gamma", "median"])
    assert exc.value.code == 1


def test_malformed_file_diagnostic(capsys, tmp_path):
    bad = tmp_path / "bad.robot.json"
    bad.write_text('{\n  "joints": [\n    {"kind": "revolute", "a": 1, "alpha": 0}\n  ]\n}\n')
    code, _, err = invoke(capsys, "special-case", "--robot", str(bad), "--q", "0")
    assert code == 1 and f"{bad}:3: joints[0].d" in err


def test_presets_list_and_write(capsys, tmp_path):
    code, out, _ = invoke(capsys, "presets")
    assert code == 0 and "baxter-like" in out and "baxter-singular-pass" in out
    code, out, _ = invoke(capsys, "presets", "--out", str(tmp_path), "--format", "json")
    written = json.loads(out)["written"]
    assert code == 0 and all((tmp_path / p).exists() for p in written)
    # a written scenario runs against the written robot and suite files
    code, _, _ = invoke(capsys, "sweep", "--scenario", str(tmp_path / "baxter-singular-pass.scenario.json"),
                        "--sample-rate", "1")
    assert code == 0


def test_module_entry_point_deterministic():
    cmd = [sys.executable, "-m", "sensobs", "sweep", "--scenario", "baxter-singular-pass", "--sample-rate", "10"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a.startswith(b"t,q1,")
