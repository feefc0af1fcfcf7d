import json

import pytest

from pdd.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, digest, main, parse_fraction, parse_points
from pdd.sets import read_set


def run(tmp_path, *argv):
    out = tmp_path / argv[0]
    code = main([*argv, "--out", str(out)])
    return code, out


def test_census_deterministic(tmp_path):
    c1, a = run(tmp_path / "a", "census", "--bound", "10")
    c2, b = run(tmp_path / "b", "census", "--bound", "10")
    assert c1 == c2 == EXIT_OK
    ma = json.loads((a / "manifest.json").read_text())
    mb = json.loads((b / "manifest.json").read_text())
    assert ma["outputs"] == mb["outputs"]
    assert {"command", "parameters", "seed", "tool_version", "timings", "outputs"} <= set(ma)


def test_digest_ignores_timing(tmp_path):
    p, q = tmp_path / "p.json", tmp_path / "q.json"
    p.write_text(json.dumps({"x": 1, "timing": {"wall": 1.0}}))
    q.write_text(json.dumps({"timing": {"wall": 9.0}, "x": 1}))
    assert digest(p) == digest(q)


def test_construct_behrend_and_count(tmp_path):
    code, out = run(tmp_path, "construct", "behrend", "--L", "100")
    assert code == EXIT_OK
    fs = read_set(out / "behrend.pddset")
    assert len(fs) == 24


def test_construct_triforce_needs_seed(tmp_path):
    assert main(["construct", "triforce", "--L", "7", "--G", "37", "--out", str(tmp_path)]) == EXIT_USAGE


def test_construct_triforce_with_seed(tmp_path):
    code, out = run(tmp_path, "construct", "triforce", "--L", "7", "--G", "37", "--seed", "3")
    assert code == EXIT_OK and (out / "manifest.json").exists()


def test_count_and_profile(tmp_path):
    set_file = tmp_path / "s.txt"
    set_file.write_text("pdd-set v1\nr=1 N=10 kind=gridset\n" + "\n".join(str(i) for i in range(1, 11)) + "\n")
    code, _ = run(tmp_path, "count", "--set", str(set_file), "--pattern", "0,1,2,5", "--d", "1")
    assert code == EXIT_OK
    code, out = run(tmp_path, "profile", "--set", str(set_file), "--pattern", "0,1,2,5", "--format", "csv")
    assert code == EXIT_OK
    assert any(f.suffix == ".csv" for f in out.iterdir())


def test_usage_errors(tmp_path):
    assert main(["nonsense"]) == EXIT_USAGE
    assert main(["phase", "--pattern", "1,1,2", "--N", "100", "--out", str(tmp_path / "x")]) == EXIT_USAGE
    assert main(["count", "--set", str(tmp_path / "missing.txt"), "--pattern", "0,1",
                 "--out", str(tmp_path / "y")]) != EXIT_OK


def test_accept_only_passing(tmp_path):
    code, out = run(tmp_path, "accept", "--only", "1,10")
    assert code == EXIT_OK
    rep = json.loads((out / "acceptance.json").read_text())
    assert rep["total"] == 2 and rep["passed"] == 2


def test_accept_failing_criterion_exit(tmp_path):
    code, _ = run(tmp_path, "accept", "--only", "9")
    assert code == EXIT_FAIL


def test_parsers():
    assert parse_points("0,1,2,5") == [0, 1, 2, 5]
    assert parse_points("0:0,1:0") == [(0, 0), (1, 0)]
    assert parse_fraction("0.25") == parse_fraction("1/4")
    with pytest.raises(ValueError):
        parse_fraction("abc")


def test_curves_primes(tmp_path):
    code, out = run(tmp_path, "curves", "--height", "15", "--primes", "3,5")
    assert code == EXIT_OK
    rep = json.loads((out / "curves.json").read_text())
    assert all(set(r["local_solubility"]) == {"3", "5"} for r in rep)
    assert main(["curves", "--primes", "4,5", "--out", str(tmp_path / "bad")]) == EXIT_USAGE
