import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from cfpart.cli import main, parse_grid, parse_real, spitzer_verdict

COIN = "{type: two_point, x1: -1, p: 0.5, x2: 1}"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


# --- parsing --------------------------------------------------------------------

@pytest.mark.parametrize("text,value", [
    ("1.5", 1.5), ("pi", math.pi), ("-pi", -math.pi), ("2pi", 2 * math.pi),
    ("pi/64", math.pi / 64), ("0.5*pi", 0.5 * math.pi), ("-3e-2", -0.03),
])
def test_parse_real(text, value):
    assert parse_real(text) == pytest.approx(value, rel=1e-15)


def test_parse_grid():
    assert np.allclose(parse_grid("-pi:pi:3"), [-math.pi, 0, math.pi])
    assert parse_grid("0.5:0.5:1").tolist() == [0.5]
    for bad in ("1:2", "0:1:0", "0:1:x", "0:1:1"):
        with pytest.raises(Exception):
            parse_grid(bad)


# --- transform ------------------------------------------------------------------

def test_transform_positive_part_exponential(capsys):
    code, out, _ = run(capsys, "transform", "positive-part", "--dist", "{type: exponential, rate: 1}",
                       "--grid=-5:5:101")
    assert code == 0
    r = rows(out)
    assert list(r[0]) == ["t", "re", "im", "err", "converged"] and len(r) == 101
    for row in r:
        t = float(row["t"])
        val = complex(float(row["re"]), float(row["im"]))
        assert abs(val - 1 / (1 - 1j * t)) <= float(row["err"]) + 1e-9
        assert row["converged"] == "true"


def test_transform_j_point_mass(capsys):
    code, out, _ = run(capsys, "transform", "j", "--dist", "{type: point_mass, x: 1}", "--a", "0",
                       "--grid", "0:0:1")
    (row,) = rows(out)
    assert code == 0 and float(row["t"]) == 0
    assert abs(float(row["re"]) - 0.5) < 1e-12 and abs(float(row["im"])) < 1e-12


def test_transform_signed_tail_normal(capsys):
    code, out, _ = run(capsys, "transform", "signed-tail", "--dist", "{type: normal}", "--a", "0")
    (row,) = rows(out)
    assert code == 0 and abs(complex(float(row["re"]), float(row["im"]))) <= float(row["err"]) + 1e-12


@pytest.mark.parametrize("kind,extra", [
    ("abs", []), ("clamp", ["--a", "-1", "--b", "1"]),
    ("joint", ["--alpha", "1", "--beta", "0.5", "--gamma", "-0.2"]),
    ("option", ["--strike", "0.3", "--beta", "1"]),
])
def test_transform_kinds_json(capsys, kind, extra):
    code, out, _ = run(capsys, "transform", kind, "--dist", "{type: normal, mu: 0.2}", "--grid", "0:2:3",
                       "--format", "json", *extra)
    data = json.loads(out)
    assert code == 0 and data["kind"] == kind and len(data["rows"]) == 3
    first = data["rows"][0]
    assert abs(complex(first["re"], first["im"]) - 1) <= first["err"] + 1e-12


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.yaml"
    cfg.write_text("distribution: {type: uniform, lo: 0, hi: 1}\n"
                   "grid: '0:1:2'\na: -1\nb: 2\nquadrature: {panel_tol: 1.0e-9}\n")
    code, out, _ = run(capsys, "transform", "clamp", "--config", str(cfg), "--grid", "0:3:4")
    assert code == 0 and len(rows(out)) == 4
    dist = tmp_path / "d.yaml"
    dist.write_text("type: cauchy\nlocation: 0\nscale: 1\n")
    code, out, _ = run(capsys, "transform", "abs", "--dist", str(dist), "--grid", "1:1:1")
    assert code == 0 and abs(float(rows(out)[0]["re"]) - math.exp(-1)) < 1e-7


def test_output_file(tmp_path, capsys):
    path = tmp_path / "out.csv"
    code, out, _ = run(capsys, "transform", "abs", "--dist", "{type: point_mass, x: -3}",
                       "--grid", "0:1:2", "--out", str(path))
    assert code == 0 and out == ""
    assert len(rows(path.read_text())) == 2


@pytest.mark.parametrize("argv", [
    ["transform", "clamp", "--dist", "{type: normal}", "--grid", "0:1:2", "--a", "2", "--b", "1"],
    ["transform", "clamp", "--dist", "{type: normal}", "--grid", "0:1:2"],
    ["transform", "abs", "--dist", "{type: nope}", "--grid", "0:1:2"],
    ["transform", "abs", "--dist", "{type: normal}"],
    ["transform", "abs", "--grid", "0:1:2"],
    ["transform", "abs", "--dist", "{type: normal}", "--grid", "0:1:2", "--tol", "2"],
    ["spitzer", "--dist", COIN, "--z-re", "1.0"],
    ["walk", "barrier", "--dist", COIN, "--a", "0", "--b", "2", "--x", "5"],
])
def test_usage_errors_exit_1(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == "" and "error" in err


def test_argparse_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 1


def test_non_convergence_exit_2(tmp_path, capsys):
    cfg = tmp_path / "q.yaml"
    cfg.write_text("quadrature: {max_depth: 1, panel_tol: 1.0e-15}\n")
    code, out, err = run(capsys, "transform", "positive-part", "--dist", "{type: normal, sigma: 0.05}",
                         "--grid", "3:3:1", "--config", str(cfg))
    assert code == 2
    assert rows(out)[0]["converged"] == "false" and "converge" in err


# --- walk -----------------------------------------------------------------------

def test_walk_point_mass_down(capsys):
    code, out, _ = run(capsys, "walk", "lindley", "--dist", "{type: point_mass, x: -1}", "--n", "3",
                       "--delta", "pi/8")
    r = rows(out)
    assert code == 0 and {row["n"] for row in r} == {"0", "1", "2", "3"}
    assert all(abs(float(row["re"]) - 1) < 1e-12 and abs(float(row["im"])) < 1e-12 for row in r)


def test_walk_lindley_dp_column(capsys):
    code, out, _ = run(capsys, "walk", "lindley", "--dist", COIN, "--n", "5", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["max_abs_diff_dp"] <= 1e-4
    assert [b["n"] for b in data["blocks"]] == list(range(6))


def test_walk_barrier_equal_barriers(capsys):
    code, out, _ = run(capsys, "walk", "barrier", "--dist", COIN, "--a", "1", "--b", "1", "--x", "1",
                       "--n", "2", "--delta", "pi/4")
    for row in rows(out):
        t = float(row["t"])
        assert abs(complex(float(row["re"]), float(row["im"])) - complex(math.cos(t), math.sin(t))) < 1e-12


# --- spitzer --------------------------------------------------------------------

def test_spitzer_trivial_and_json_round_trip(capsys):
    code, out, _ = run(capsys, "spitzer", "--dist", COIN, "--s", "0,0.7", "--t", "0,0.4",
                       "--z-re", "0.5,0", "--z-im", "0,0", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data["entries"]) == 8
    for e in data["entries"]:
        assert spitzer_verdict(e, data["tolerance"]) == e["pass"] is True
        if e["s"] == 0 and e["t"] == 0 and e["z_re"] == 0.5:
            for side in ("lhs", "rhs", "classic"):
                assert abs(e[side]["re"] - 2) < 1e-10
        if e["z_re"] == 0:
            for side in ("lhs", "rhs", "classic"):
                assert e[side]["re"] == 1 and e[side]["im"] == 0
    reparsed = json.loads(json.dumps(data))
    assert [spitzer_verdict(e) for e in reparsed["entries"]] == [e["pass"] for e in data["entries"]]


def test_spitzer_verdict_detects_gap():
    e = {"lhs": {"re": 1.0, "im": 0.0, "truncation_bound": 0.0, "err": 0.0},
         "rhs": {"re": 1.01, "im": 0.0, "err": 0.0},
         "classic": {"re": 1.01, "im": 0.0, "truncation_bound": 0.0, "err": 0.0}}
    assert not spitzer_verdict(e)
    e["lhs"]["truncation_bound"] = 0.02
    assert spitzer_verdict(e)


def test_spitzer_monte_carlo_fallback(capsys):
    code, out, _ = run(capsys, "spitzer", "--dist", "{type: normal, mu: -0.2}", "--s", "0.5", "--t", "0.3",
                       "--z-re", "0.3", "--N", "12", "--paths", "20000", "--seed", "3", "--format", "json")
    (e,) = json.loads(out)["entries"]
    assert e["lhs_source"] == "monte_carlo" and e["lhs"]["err"] > 0
    assert code in (0, 3) and e["pass"] == (code == 0)


# --- validate and determinism ---------------------------------------------------

def test_validate(capsys):
    code, out, _ = run(capsys, "validate")
    r = rows(out)
    assert code == 0 and all(row["pass"] == "true" for row in r) and len(r) >= 5


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "cfpart", *argv], capture_output=True, check=False)


def test_byte_identical_runs():
    for argv in (["spitzer", "--dist", COIN, "--s", "0.3,0.7", "--t", "0.4", "--z-re", "0.5",
                  "--z-im", "0.2", "--seed", "7", "--format", "json"],
                 ["transform", "abs", "--dist", "{type: normal}", "--grid=-2:2:5", "--workers", "2"]):
        a, b = _cli(*argv), _cli(*argv)
        assert a.returncode == 0 and a.stdout == b.stdout and a.stdout
