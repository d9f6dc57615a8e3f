import json
import math
import subprocess
import sys

import pytest

from maslov.cli import interference_report, main, make_parser


def run(capsys, argv):
    rc = main(argv)
    out = capsys.readouterr().out
    return rc, out


def test_kernel_oscillator_json(capsys):
    rc, out = run(capsys, ["kernel", "--model", "osc", "--x1", "0", "--x2", "0",
                           "--t", "1.5707963", "--omega", "1"])
    assert rc == 0
    rec = json.loads(out)
    assert rec["modulus"] == pytest.approx(0.39894, abs=1e-5)
    assert rec["phase"] == pytest.approx(-0.7854, abs=1e-4)
    assert rec["maslov_N"] == 0


def test_kernel_caustic_json(capsys):
    rc, out = run(capsys, ["kernel", "--model", "osc", "--t", "3.1415926535"])
    assert rc == 0
    rec = json.loads(out)
    assert rec == {"caustic": True, "N": 1, "parity": -1,
                   "phase": pytest.approx(-math.pi / 2, abs=1e-9)}


def test_kernel_free_json(capsys):
    rc, out = run(capsys, ["kernel", "--model", "free", "--t", "1", "--x1", "0", "--x2", "0"])
    rec = json.loads(out)
    assert rc == 0 and rec["modulus"] == pytest.approx(0.39894, abs=1e-5)


def test_kernel_magnetic_json(capsys):
    rc, out = run(capsys, ["kernel", "--model", "magnetic", "--x1", "0", "--y1", "0",
                           "--x2", "1", "--y2", "0", "--t", str(math.pi / 2)])
    rec = json.loads(out)
    assert rc == 0
    assert rec["modulus"] == pytest.approx(1 / (2 * math.pi), rel=1e-9)
    assert rec["phase"] == pytest.approx(-math.pi / 2, rel=1e-9)


def test_kernel_potential_matches_oscillator(capsys):
    rc, out = run(capsys, ["kernel", "--model", "potential", "--potential", "0.5*x**2",
                           "--x1", "0", "--x2", "0.5", "--t", "1.3"])
    rec = json.loads(out)
    rc2, out2 = run(capsys, ["kernel", "--model", "osc", "--x1", "0", "--x2", "0.5",
                             "--t", "1.3"])
    ref = json.loads(out2)
    assert rec["re"] == pytest.approx(ref["re"], rel=1e-5)
    assert rec["im"] == pytest.approx(ref["im"], rel=1e-5)


def test_scan_deterministic_and_consistent(tmp_path, capsys):
    args = ["scan", "--model", "osc", "--t-min", str(math.pi / 2), "--t-max",
            str(3 * math.pi / 2), "--steps", "3", "--methods", "closed,modes,vanvleck",
            "--grid", "256"]
    rc, out1 = run(capsys, args)
    assert rc == 0
    rc, out2 = run(capsys, args)
    assert out1 == out2  # byte-identical reruns

    lines = out1.strip().split("\n")
    header = lines[0].split(",")
    assert header[0] == "t[1/omega]"  # time unit named when a frequency exists
    assert header[1:] == ["method", "re", "im", "modulus", "phase_unwrapped",
                          "maslov_N", "n_negative", "morse_index", "caustic"]
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 9
    # ascending T, grouped method triples
    ts = [float(r[0]) for r in rows]
    assert ts == sorted(ts)
    # the midpoint T = pi is a focal time: flagged, no amplitude
    mid = [r for r in rows if abs(float(r[0]) - math.pi) < 1e-9]
    assert len(mid) == 3 and all(r[-1] == "1" and r[2] == "" for r in mid)
    # regular rows: crossing count, inertia and index columns agree
    for r in rows:
        if r[-1] == "0":
            assert r[6] == r[7] == r[8]
    by_t = {}
    for r in rows:
        if r[-1] == "0":
            by_t.setdefault(r[0], []).append(complex(float(r[2]), float(r[3])))
    for values in by_t.values():
        base = values[0]
        for v in values[1:]:
            assert abs(v - base) <= 1e-6 * abs(base)
    # crossing count steps from 0 to 1 across the focal time
    ns = [int(r[6]) for r in rows]
    assert min(ns) == 0 and max(ns) == 1


def test_scan_free_has_no_crossings(capsys):
    rc, out = run(capsys, ["scan", "--model", "free", "--t-min", "0.5", "--t-max", "5",
                           "--steps", "4", "--methods", "closed", "--grid", "128"])
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[0].split(",")[0] == "t"
    assert all(line.split(",")[6] == "0" for line in lines[1:])


def test_scan_output_file(tmp_path, capsys):
    target = tmp_path / "scan.csv"
    rc, _ = run(capsys, ["scan", "--model", "osc", "--t-min", "1", "--t-max", "2",
                         "--steps", "2", "--grid", "128", "--out", str(target)])
    assert rc == 0
    text = target.read_bytes()
    assert b"\r" not in text and text.decode("utf-8").count("\n") == 3


def test_morse_json_examples(capsys):
    rc, out = run(capsys, ["morse", "--model", "osc", "--t", str(3.5 * math.pi)])
    rec = json.loads(out)
    assert rc == 0
    assert rec["morse_index"] == 3 and rec["agreement"] is True
    assert rec["multiplicities"] == [1, 1, 1]

    rc, out = run(capsys, ["morse", "--model", "magnetic", "--t", str(2.5 * math.pi),
                           "--grid", "384"])
    rec = json.loads(out)
    # doubly degenerate refocusing each full cyclotron turn
    assert rec["morse_index"] == 4 and rec["multiplicities"] == [2, 2]
    assert rec["agreement"] is True

    rc, out = run(capsys, ["morse", "--model", "free", "--t", "5"])
    rec = json.loads(out)
    assert rec["morse_index"] == 0 and rec["conjugate_times"] == []


def test_morse_focal_time_exits_1(capsys):
    rc = main(["morse", "--model", "osc", "--t", str(math.pi)])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_interfere_phase_extraction(capsys):
    tau = 2 * math.pi
    rep = interference_report(1, 1, 1, 0.25 * tau, 0.6 * tau, grid=2048)
    assert rep["relative_maslov_phase"] == pytest.approx(-math.pi / 2, abs=1e-3)
    rep = interference_report(1, 1, 1, 0.25 * tau, 0.3 * tau, grid=2048)
    assert rep["relative_maslov_phase"] == pytest.approx(0.0, abs=1e-3)
    rep = interference_report(1, 1, 1, 0.25 * tau, 1.1 * tau, grid=2048)
    assert abs(rep["relative_maslov_phase"]) == pytest.approx(math.pi, abs=1e-3)


def test_interfere_cli_and_endpoint_check(tmp_path, capsys):
    rc, out = run(capsys, ["interfere", "--model", "osc", "--grid", "1024"])
    rec = json.loads(out)
    assert rc == 0
    assert rec["relative_maslov_phase"] == pytest.approx(-math.pi / 2, abs=1e-3)
    assert rec["caustics_crossed"] == 1
    # mismatched classical endpoints are a configuration error
    rc = main(["interfere", "--model", "osc", "--x0", "0.5", "--grid", "512"])
    assert rc == 1
    capsys.readouterr()


def test_interfere_profile_csv(tmp_path, capsys):
    target = tmp_path / "profile.csv"
    rc, _ = run(capsys, ["interfere", "--model", "osc", "--grid", "2048",
                         "--sigma", "0.1", "--out", str(target)])
    assert rc == 0
    lines = target.read_text().strip().split("\n")
    assert lines[0] == "x,re_a,im_a,re_b,im_b,intensity"
    assert len(lines) == 2049


def test_invalid_flags_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["kernel", "--model", "osc", "--t", "1", "--bogus", "3"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["scan", "--model", "osc", "--steps", "5"])  # missing range
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["scan", "--model", "osc", "--t-min", "1", "--t-max", "2",
              "--methods", "sorcery"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["kernel", "--model", "osc", "--t", "-1"])  # nonpositive time
    assert info.value.code == 2


def test_default_grid_env_override(monkeypatch):
    monkeypatch.setenv("MASLOV_DEFAULT_GRID", "777")
    args = make_parser().parse_args(["kernel", "--model", "osc", "--t", "1"])
    assert args.grid == 777


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "maslov.cli", "kernel", "--model", "osc", "--t", "1"],
        capture_output=True, text=True, check=True,
    )
    rec = json.loads(out.stdout)
    assert rec["maslov_N"] == 0
