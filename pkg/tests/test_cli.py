import hashlib
import json
import subprocess
import sys

import pytest

from quaddyn.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    assert code == 0, out
    return json.loads(out)


# -- examples ------------------------------------------------------------------------------

def test_common_preper_example(capsys):
    d = run_json(capsys, "common-preper", "--c1", "0", "--c2", "-1", "--bound", "8")
    assert set(d["rational_points"]) == {"0", "1", "-1"}
    assert d["distinct_common_count"] == 3 and d["include_infinity_total"] == 4


def test_negative_fraction_arguments(capsys):
    d = run_json(capsys, "common-preper", "--c1", "-21/16", "--c2", "-29/16", "--bound", "7")
    assert d["include_infinity_total"] == 27


def test_audit_delta(capsys):
    assert run_json(capsys, "audit", "delta")["verified"] is True
    assert run_json(capsys, "audit", "b")["verified"] is True
    assert run_json(capsys, "audit", "constants")["alpha1"] == "1/192"


def test_julia_render(tmp_path, capsys):
    paths = [tmp_path / "a.ppm", tmp_path / "b.ppm"]
    for p in paths:
        code, _ = run(capsys, "julia-render", "--c", "-1", "--width", "64", "--height", "64", "--out", str(p))
        assert code == 0
    data = paths[0].read_bytes()
    assert data.startswith(b"P6\n64 64\n255\n")
    assert len(data) == len(b"P6\n64 64\n255\n") + 64 * 64 * 3
    assert hashlib.sha256(data).digest() == hashlib.sha256(paths[1].read_bytes()).digest()


def test_pairing_command(capsys):
    d = run_json(capsys, "pairing", "--c1", "1/5", "--c2", "6/5", "--mc-samples", "2000")
    assert d["contributing_primes"] == [5]
    assert d["arch_part"]["samples"] == 2000 and d["arch_part"]["seed"] == 42


def test_local_energy_command(capsys):
    d = run_json(capsys, "local-energy", "--c1", "1/625", "--c2", "126/625", "--place", "5")
    assert d["exact"] is True and d["lower_terms"] == {"5": "3/4"}
    d = run_json(capsys, "local-energy", "--c1", "0", "--c2", "-1", "--place", "inf", "--mc-samples", "1000")
    assert d["place"] == "inf" and d["mean"] > 0


def test_heights(capsys):
    d = run_json(capsys, "height", "--c", "-29/16")
    assert d["height"]["terms"] == {"29": "1"}
    d = run_json(capsys, "height2", "--c1", "-21/16", "--c2", "-29/16")
    assert d["height"]["terms"] == {"29": "1"}


def test_canonical_height_command(capsys):
    d = run_json(capsys, "canonical-height", "--c", "-1", "--x", "0")
    assert d["preperiodic"] is True and float(d["value"]["hi"]) == 0
    d = run_json(capsys, "canonical-height", "--c", "0", "--x", "2", "--precision", "1e-9")
    assert abs(float(d["value"]["lo"]) - 0.6931471805599453) < 1e-8


def test_disjoint_at(capsys):
    assert run_json(capsys, "disjoint-at", "--c1", "-2", "--c2", "-21/10", "--p", "5")["result"] == "Disjoint"
    assert run_json(capsys, "disjoint-at", "--c1", "1/5", "--c2", "6/5", "--p", "5")["result"] == "NotDetermined"


def test_formats(capsys):
    code, out = run(capsys, "height", "--c", "3/2", "--format", "text")
    assert code == 0 and out.startswith("c: 3/2")
    code, out = run(capsys, "pairing", "--c1", "0", "--c2", "-1", "--mc-samples", "500", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("c1,c2,h,") and len(lines) == 2


# -- exit codes --------------------------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ["pairing", "--c1", "0.5", "--c2", "1"],          # decimals are rejected
    ["common-preper", "--c1", "0", "--c2", "1"],       # missing bound
    ["nosuch"],
    ["pairing", "--c1", "0", "--c2", "1", "--seed", str(2**64)],
    ["local-energy", "--c1", "0", "--c2", "1", "--place", "4"],
])
def test_parse_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


@pytest.mark.parametrize("argv", [
    ["common-preper", "--c1", "1/3", "--c2", "1/3", "--bound", "2"],
    ["common-preper", "--c1", "0", "--c2", "-1", "--bound", "11"],
    ["disjoint-at", "--c1", "0", "--c2", "1", "--p", "6"],
])
def test_computation_errors_exit_1(argv, capsys):
    code, out = run(capsys, *argv)
    assert code == 1
    err = json.loads(out)
    assert set(err) == {"error", "message"}


def test_missing_corpus_exit_1(tmp_path, capsys):
    code, out = run(capsys, "bounds-check", "--corpus", str(tmp_path / "none.csv"))
    assert code == 1 and "error" in json.loads(out)


# -- determinism, seeds and round trips ----------------------------------------------------------

def test_identical_argv_identical_output(capsys):
    argv = ["pairing", "--c1", "1/3", "--c2", "-2", "--mc-samples", "3000", "--seed", "7"]
    assert run(capsys, *argv) == run(capsys, *argv)


def test_seed_from_environment(monkeypatch, capsys):
    argv = ["pairing", "--c1", "1/3", "--c2", "-2", "--mc-samples", "1000"]
    monkeypatch.setenv("QUADDYN_SEED", "7")
    from_env = run_json(capsys, *argv)
    assert from_env["arch_part"]["seed"] == 7
    explicit = run_json(capsys, *argv, "--seed", "7")
    assert explicit == from_env
    overridden = run_json(capsys, *argv, "--seed", "8")
    assert overridden["arch_part"]["seed"] == 8


def test_bad_env_seed(monkeypatch, capsys):
    monkeypatch.setenv("QUADDYN_SEED", "abc")
    with pytest.raises(SystemExit) as exc:
        main(["pairing", "--c1", "0", "--c2", "1", "--mc-samples", "100"])
    assert exc.value.code == 2


def test_json_round_trip(capsys):
    code, out = run(capsys, "pairing", "--c1", "-21/16", "--c2", "-29/16", "--mc-samples", "1000")
    d = json.loads(out)
    assert json.loads(json.dumps(d)) == d
    # rationals stay exact strings and floats survive a reparse
    assert d["c1"] == "-21/16"
    assert float(repr(d["arch_part"]["mean"])) == d["arch_part"]["mean"]


def test_bounds_check(tmp_path, capsys):
    corpus = tmp_path / "pairs.csv"
    corpus.write_text("c1,c2\n0,-1\n-21/16,-29/16\n1/5,6/5\n")
    d = run_json(capsys, "bounds-check", "--corpus", str(corpus), "--mc-samples", "2000")
    assert d["pairs"] == 3 and d["all_pass"] is True
    code, out = run(capsys, "bounds-check", "--corpus", str(corpus), "--mc-samples", "2000", "--format", "csv")
    assert out.splitlines()[0].endswith("lower_ok,upper_ok,weak_ok")


def test_bounds_check_needs_header(tmp_path, capsys):
    corpus = tmp_path / "pairs.csv"
    corpus.write_text("a,b\n0,-1\n")
    code, _ = run(capsys, "bounds-check", "--corpus", str(corpus))
    assert code == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "quaddyn", "height", "--c", "3/2"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["c"] == "3/2"
