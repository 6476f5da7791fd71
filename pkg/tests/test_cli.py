import json

import pytest

from doldkan import cli
from doldkan.nc_geometry import upper_triangular


def run(capsys, *args):
    code = cli.main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_table_sphere(capsys):
    code, out, _ = run(capsys, "table", "--input", "sphere:2")
    rows = json.loads(out)
    assert code == 0
    assert [(r["degree"], r["betti"], r["torsion"]) for r in rows] == [(0, 0, []), (1, 0, []), (2, 1, [])]


def test_table_times_two_csv(capsys):
    code, out, _ = run(capsys, "table", "--input", "times:2", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "betti,degree,object,torsion,truncated"
    assert lines[1].startswith("0,0,") and lines[2].startswith("0,1,") and ",2," in lines[2]


def test_table_dual_numbers(capsys):
    # H_n(N∐) agrees with Ω^n, and rank Ω^n = 2·1^n
    code, out, _ = run(capsys, "table", "--input", "algebra:dual-numbers")
    assert code == 0
    assert [r["betti"] for r in json.loads(out)] == [2, 2, 2]


def test_table_algebra_file(tmp_path, capsys):
    f = tmp_path / "s.json"
    doc = upper_triangular().to_json()
    doc["unit"] = [1, 0, 0]
    f.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "table", "--input", str(f), "--wmax", "2")
    assert code == 0 and [r["betti"] for r in json.loads(out)] == [3, 6]


def test_verify_suites(capsys):
    for suite in ("kequivq", "yangbaxter", "monoidal"):
        code, out, _ = run(capsys, "verify", "--suite", suite, "--seed", "0")
        rows = json.loads(out)
        assert code == 0 and rows and all(r["verdict"] == "pass" for r in rows)


def test_verify_unknown_suite(capsys):
    code, _, err = run(capsys, "verify", "--suite", "nope")
    assert code == 2 and "unknown suite" in err


def test_omega_and_amitsur(capsys):
    code, out, _ = run(capsys, "omega", "--input", "algebra:upper2", "--rmax", "2")
    rows = json.loads(out)
    assert code == 0 and [r.get("rank") for r in rows[:3]] == [3, 6, 12]
    code, out, _ = run(capsys, "amitsur", "--input", "algebra:dual-numbers", "--levels", "2", "--format", "csv")
    assert code == 0 and "fail" not in out


def test_exit_codes(tmp_path, capsys):
    assert run(capsys, "table", "--input", "sphere:x")[0] == 2
    assert run(capsys, "table")[0] == 2
    assert run(capsys, "table", "--input", "algebra:nope")[0] == 2
    assert run(capsys, "table", "--input", "sphere:1", "--ring", "q")[0] == 2
    assert run(capsys, "table", "--input", "sphere:1", "--levels", "0")[0] == 2
    assert run(capsys, "omega", "--input", "sphere:1")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "table", "--input", str(bad))[0] == 2
    nonassoc = tmp_path / "na.json"
    nonassoc.write_text(json.dumps({"modulus": 0, "rank": 2, "structure": [[[1, 0], [0, 1]], [[0, 1], [0, 0]]],
                                    "unit": [0, 1]}))
    assert run(capsys, "table", "--input", str(nonassoc))[0] == 2
    assert run(capsys, "table", "--input", "sphere:6")[0] == 3
    assert run(capsys, "amitsur", "--input", "algebra:dual-numbers", "--levels", "3", "--rmax", "2")[0] == 3
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2


def test_failing_identity_exit_code(monkeypatch, capsys):
    from doldkan import suites

    monkeypatch.setitem(suites.SUITES, "broken", lambda P: [suites.Check("broken", "always", False, "x")])
    code, out, _ = run(capsys, "verify", "--suite", "broken")
    assert code == 1 and json.loads(out)[0]["verdict"] == "fail"


def test_config_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"input": "sphere:1", "format": "csv"}))
    code, out, _ = run(capsys, "table", "--input", "sphere:2", "--config", str(cfg))
    assert code == 0 and out.count("\n") == 3
    cfg.write_text(json.dumps({"colour": "red"}))
    assert run(capsys, "table", "--input", "sphere:2", "--config", str(cfg))[0] == 2


def test_help_lists_defaults(capsys):
    with pytest.raises(SystemExit):
        cli.main(["verify", "--help"])
    out = capsys.readouterr().out
    assert "--levels" in out and "default: 4" in out
