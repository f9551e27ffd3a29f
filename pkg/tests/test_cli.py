"""End to end tests of the command line interface, run in process."""

import json
import os

import pytest

from torusdyn.cli import main
from torusdyn.curves import straight_curve, write_curve


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def read_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def read_bytes(path):
    with open(path, "rb") as fh:
        return fh.read()


def curve_file(tmp_path, name, w, base=(0, 0)):
    path = str(tmp_path / name)
    write_curve(path, straight_curve(w, base))
    return path


def test_rotset_translation(tmp_path, capsys):
    out = str(tmp_path / "o")
    code, stdout, _ = run(
        capsys, "rotset", "--gallery", "translation", "-n", "100",
        "--grid", "16", "--svg", "--cloud", "--out", out)
    assert code == 0
    assert stdout.strip() == "point"
    data = read_json(os.path.join(out, "rotset.json"))
    assert data["config"]["n"] == 100
    hull = data["estimate"]["hull"]["vertices"]
    assert len(hull) == 1
    assert hull[0][0] == pytest.approx(0.3, abs=1e-6)
    assert hull[0][1] == pytest.approx(0.7, abs=1e-6)
    with open(os.path.join(out, "hull.csv"), "r", encoding="utf-8") as fh:
        lines = fh.read().strip().splitlines()
    assert lines[0] == "x,y"
    assert len(lines) == 2
    svg = read_bytes(os.path.join(out, "rotset.svg"))
    assert svg.startswith(b"<!-- torusdyn ")


def test_rotset_determinism(tmp_path, capsys):
    outs = []
    for sub in ("a", "b"):
        out = str(tmp_path / sub)
        code, _, _ = run(
            capsys, "rotset", "--gallery", "mz_interior", "-n", "30",
            "--grid", "8", "--svg", "--out", out)
        assert code == 0
        outs.append(out)
    for name in ("rotset.json", "hull.csv", "rotset.svg"):
        assert (read_bytes(os.path.join(outs[0], name))
                == read_bytes(os.path.join(outs[1], name)))


def test_classify_command(tmp_path, capsys):
    out = str(tmp_path / "o")
    code, stdout, _ = run(
        capsys, "classify", "--gallery", "anosov", "-n", "50",
        "--grid", "8", "--out", out)
    assert code == 0
    assert stdout.strip() == "Hyperbolic"
    data = read_json(os.path.join(out, "classify.json"))
    report = data["report"]
    assert report["verdict"] == "Hyperbolic"
    assert report["route"] == "AnosovTrace"


def test_crossing_command(tmp_path, capsys):
    fa = curve_file(tmp_path, "a.json", (1, 0))
    fb = curve_file(tmp_path, "b.json", (1, 3), base=(0, "1/7"))
    out = str(tmp_path / "o")
    code, stdout, _ = run(
        capsys, "crossing", "--curve-a", fa, "--curve-b", fb,
        "--out", out)
    assert code == 0
    assert stdout.strip() == "3"
    data = read_json(os.path.join(out, "crossing.json"))
    assert data["crossing_number"] == 3
    assert data["class_b"] == [1, 3]


def test_distance_and_verify_round_trip(tmp_path, capsys):
    fa = curve_file(tmp_path, "a.json", (1, 0))
    fb = curve_file(tmp_path, "b.json", (1, 2), base=("1/7", "1/11"))
    out = str(tmp_path / "o")
    code, stdout, _ = run(
        capsys, "distance", "--curve-a", fa, "--curve-b", fb,
        "--out", out)
    assert code == 0
    lower, upper = stdout.split()[1], stdout.split()[3]
    assert int(lower) <= int(upper)
    cert_path = os.path.join(out, "certificate.json")
    data = read_json(os.path.join(out, "distance.json"))
    assert data["lower"] == int(lower)
    assert data["upper"] == int(upper)

    code, stdout, _ = run(
        capsys, "verify-certificate", cert_path, "--out", out)
    assert code == 0
    assert stdout.strip() == "pass"
    assert read_json(os.path.join(out, "verify.json"))["valid"]


def test_verify_tampered_certificate_fails(tmp_path, capsys):
    fa = curve_file(tmp_path, "a.json", (0, 1), base=("1/3", 0))
    fb = curve_file(tmp_path, "b.json", (2, 1), base=("1/7", "1/11"))
    out = str(tmp_path / "o")
    code, _, _ = run(
        capsys, "distance", "--curve-a", fa, "--curve-b", fb,
        "--out", out)
    assert code == 0
    cert_path = os.path.join(out, "certificate.json")
    cert = read_json(cert_path)
    cert["curves"][1]["verts"][0][1] = "1/16"
    with open(cert_path, "w", encoding="utf-8") as fh:
        json.dump(cert, fh)
    code, stdout, _ = run(
        capsys, "verify-certificate", cert_path, "--out", out)
    assert code == 4
    assert stdout.startswith("fail at step")


def test_malformed_input_reports_position(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"w": [1, 0],\n  "verts": [[0, 0]')
    out = str(tmp_path / "o")
    code, _, stderr = run(
        capsys, "crossing", "--curve-a", str(bad),
        "--curve-b", str(bad), "--out", out)
    assert code == 2
    err = json.loads(stderr)
    assert err["error"] == "InputError"
    assert "line" in err["message"]


def test_missing_map_is_an_input_error(tmp_path, capsys):
    out = str(tmp_path / "o")
    code, _, stderr = run(
        capsys, "classify", "--gallery", "no_such_map", "--out", out)
    assert code == 2
    assert json.loads(stderr)["error"] == "InputError"


def test_gallery_list_and_build(tmp_path, capsys):
    out = str(tmp_path / "o")
    code, stdout, _ = run(capsys, "gallery", "--out", out)
    assert code == 0
    names = stdout.split()
    assert "anosov" in names and "translation" in names
    catalog = read_json(os.path.join(out, "gallery.json"))
    assert len(catalog["catalog"]) == len(names)

    code, stdout, _ = run(
        capsys, "gallery", "translation", "--param", "vx=0.25",
        "--out", out)
    assert code == 0
    spec = read_json(os.path.join(out, "translation.map.json"))
    flat = json.dumps(spec)
    assert "0.25" in flat
