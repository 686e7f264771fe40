import json
import subprocess
import sys

import pytest

from isodensity.cli import main


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, obj in {
        "disk": {"kind": "disk", "center": [0, 0], "radius": 2},
        "star": {"kind": "fourier_star", "center": [0, 0], "a0": 1, "cos": [0.1, 0.05], "sin": [0, 0.03]},
        "far": {"kind": "disk", "center": [3, 0], "radius": 1},
        "bad": {"kind": "triangle"},
    }.items():
        paths[name] = tmp_path / f"{name}.json"
        paths[name].write_text(json.dumps(obj))
    paths["tmp"] = tmp_path
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestSuccess:
    def test_verify_centered_disk(self, capsys, files):
        code, out, _ = run(capsys, "verify", "--domain", files["disk"], "--p", 0.5)
        rep = json.loads(out)
        assert code == 0 and rep["deficit"] == 0.0 and rep["verdict"] == "holds"

    def test_replay(self, capsys, files):
        code, out, _ = run(capsys, "replay", "--domain", files["star"], "--p", 1, "--series-n", 256)
        rep = json.loads(out)
        assert code == 0 and rep["chain"][0] <= rep["chain"][1] <= rep["chain"][2]

    def test_two_ball(self, capsys):
        code, out, _ = run(capsys, "search", "two-ball", "--r", 1, "--p", -0.5)
        assert code == 0 and json.loads(out)["separation"] == pytest.approx(27.94, abs=0.5)

    def test_scan_csv(self, capsys, files):
        code, out, _ = run(capsys, "scan", "--domain", files["star"], "--p=-1,0,1", "--format", "csv")
        lines = out.strip().splitlines()
        assert code == 0 and lines[0] == "p,lhs,rhs,deficit,verdict" and len(lines) == 4

    def test_out_of_hypothesis_is_not_a_violation(self, capsys, files):
        code, out, _ = run(capsys, "verify", "--domain", files["far"], "--p", -0.5)
        assert code == 0 and json.loads(out)["verdict"] == "out_of_hypothesis"

    def test_green_and_hs(self, capsys, files):
        assert run(capsys, "green", "--domain", files["star"], "--beta", 1)[0] == 0
        code, out, _ = run(capsys, "green", "--domain", files["disk"], "--beta", 0, "--x", "0.5,0")
        assert code == 0 and json.loads(out)["representation"] == "disk"
        code, out, _ = run(capsys, "hs", "--domain", files["disk"], "--p", 0, "--q", 0)
        assert code == 0 and json.loads(out)["exponents"]["admissible"] is True

    def test_thresholds(self, capsys):
        code, out, _ = run(capsys, "thresholds", "--p=-0.5,-1")
        rows = json.loads(out)["thresholds"]
        assert code == 0 and rows[1]["separation"] is None

    def test_translate(self, capsys):
        code, out, _ = run(capsys, "search", "translate", "--p", 1, "--offsets", "0,0.2,0.5")
        assert code == 0 and json.loads(out)["violations"] == 0

    def test_deterministic_files(self, capsys, files):
        a, b = files["tmp"] / "a.json", files["tmp"] / "b.json"
        for path in (a, b):
            assert run(capsys, "search", "perturb", "--p", 1, "--n", 10, "--seed", 5, "--out", path)[0] == 0
        assert a.read_bytes() == b.read_bytes()


class TestErrors:
    @pytest.mark.parametrize("argv", [
        ["verify", "--domain", "missing.json", "--p", "1"],
        ["verify", "--p", "1"],
        ["verify", "--domain", "{disk}", "--p", "-3"],
        ["verify", "--domain", "{bad}", "--p", "1"],
        ["verify", "--domain", "{disk}", "--p", "1", "--quad-order", "4"],
        ["replay", "--domain", "{star}", "--p", "1", "--series-n", "100"],
        ["green", "--domain", "{star}", "--beta", "3"],
        ["search", "two-ball", "--p", "-1"],
        ["frobnicate"],
    ])
    def test_single_line_error_exit_one(self, capsys, files, argv):
        argv = [a.format(**{k: str(v) for k, v in files.items()}) for a in argv]
        code, out, err = run(capsys, *argv)
        assert code == 1 and out == ""
        lines = err.strip().splitlines()
        assert len(lines) == 1 and "error" in json.loads(lines[0])

    def test_violation_exit_two(self, capsys, files, monkeypatch):
        import isodensity.cli as cli
        from isodensity.measures import DeficitReport

        def fake(d, p, tol, order):
            return DeficitReport(1.0, 0.5, -0.5, p, True, "inside", "fails", order, tol)

        monkeypatch.setattr(cli, "deficit", fake)
        assert run(capsys, "verify", "--domain", files["disk"], "--p", 1)[0] == 2


def test_console_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "isodensity.cli", "verify", "--domain",
                           str(files["disk"]), "--p", "1", "--format", "csv"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("p,lhs,rhs,deficit,verdict")
