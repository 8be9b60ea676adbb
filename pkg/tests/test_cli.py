import csv
import io
import json

import pytest

from qint.cli import main
from qint.formats import data_file


def test_algebra_build_fixture(run_cli):
    code, rep, _ = run_cli("algebra", "build", "example7-A")
    assert code == 0 and rep["exit_code"] == 0
    assert rep["result"]["algebra"]["dim"] == 11
    assert len(rep["result"]["algebra"]["basis"]) == 11


def test_algebra_check_files(run_cli):
    assert run_cli("algebra", "check", data_file("example7_A.json"))[0] == 0
    code, rep, _ = run_cli("algebra", "check", data_file("example7_A_corrupted.json"))
    assert code == 2
    checks = {c["name"]: c for c in rep["result"]["report"]["checks"]}
    assert not checks["associativity"]["passed"] and checks["associativity"]["residual"] == 2.0


def test_algebra_malformed_and_missing(run_cli):
    assert run_cli("algebra", "check", data_file("malformed.json"))[0] == 1
    assert run_cli("algebra", "check", "nope.json")[0] == 1
    assert run_cli("algebra", "check", "nope")[0] == 1


def test_hom_check(run_cli):
    assert run_cli("hom", "check", "path-square")[0] == 0
    code, rep, _ = run_cli("hom", "check", data_file("example7_sigma.json"))
    assert code == 2
    names = {c["name"]: c["passed"] for c in rep["result"]["report"]["checks"]}
    assert names == {"unital": True, "multiplicative": False}
    assert run_cli("hom", "check", "zero-unit")[0] == 2


def test_integrate_example7(run_cli, tmp_path):
    csv_path = tmp_path / "trace.csv"
    code, rep, _ = run_cli("integrate", "--fixture", "example7", "--rule", "midpoint", "--u", "1", "--csv", csv_path)
    assert code == 0
    val = rep["result"]["value"]
    assert val == pytest.approx({"e1": 0.5, "e2": 0.5, "e3": 0.5, "a": 0.5, "b": 0.5, "c": 0.5}, abs=1e-9)
    assert rep["result"]["cells"] == 2048
    rows = list(csv.reader(io.StringIO(csv_path.read_text(), newline="")))
    assert rows[0] == ["level", "delta", "e1", "e2", "e3", "a", "b", "c"]
    assert len(rows) == 2


def test_integrate_fixtures(run_cli):
    code, rep, _ = run_cli("integrate", "--fixture", "lebesgue-x", "--tol", "1e-3")
    assert code == 0 and rep["result"]["value"]["1"] == pytest.approx(0.5, abs=1e-3)
    code, rep, _ = run_cli("integrate", "--fixture", "constant-one")
    assert code == 0 and rep["result"]["levels"] == [0]
    assert rep["result"]["value"] == {"e1": 4.0, "e2": 4.0, "e3": 4.0, "a": 0.0, "b": 0.0, "c": 0.0}
    assert run_cli("integrate", "--fixture", "lebesgue-exp", "--u-max", "3", "--tol", "1e-9")[0] == 3


def test_integrate_config(run_cli, tmp_path):
    code, rep, _ = run_cli("integrate", "--config", data_file("integrate_example7.json"))
    assert code == 0 and rep["result"]["value"]["a"] == pytest.approx(0.5)
    cfg = tmp_path / "bochner.json"
    cfg.write_text(json.dumps({
        "A": "R2", "B": "R3", "sigma": "zero",
        "handle": {"kind": "affine", "offset": [0, 0, 1], "coords": [[1, 0, 0], [0, 1, 0]]},
    }))
    code, rep, _ = run_cli("integrate", "--config", cfg)
    assert code == 0 and list(rep["result"]["value"].values()) == pytest.approx([0.5, 0.5, 1.0])
    cfg.write_text(json.dumps({"context": "lebesgue", "handle": {"kind": "exp"}, "bogus": 1}))
    assert run_cli("integrate", "--config", cfg)[0] == 1
    assert run_cli("integrate")[0] == 1
    assert run_cli("integrate", "--fixture", "nope")[0] == 1


def test_laws_exit_codes(run_cli):
    code, rep, _ = run_cli("laws", "hsquare", "--seed", "7", "--trials", "100")
    assert code == 0 and rep["seed"] == 7
    assert run_cli("laws", "daniell", "--fixture", "shrink")[0] == 0
    code, rep, _ = run_cli("laws", "hsquare", "--fixture", "mutated-theta", "--trials", "5")
    assert code == 2
    assert run_cli("laws", "daniell", "--fixture", "wiggle")[0] == 1
    assert run_cli("laws", "opnorm", "--context", "nowhere")[0] == 1


def test_laws_report_is_reproducible(tmp_path):
    outs = []
    for i in range(2):
        p = tmp_path / f"r{i}.json"
        assert main(["laws", "bimodule", "--seed", "3", "--trials", "5", "--out", str(p)]) == 0
        outs.append([l for l in p.read_text().splitlines() if '"timestamp"' not in l])
    assert outs[0] == outs[1]


def test_approx_cli(run_cli, tmp_path):
    out = tmp_path / "e.csv"
    js = tmp_path / "e.json"
    code = main(["approx", "taylor", "exp", "--orders", *map(str, range(1, 9)), "--out", str(out), "--json", str(js)])
    assert code == 0
    rows = list(csv.reader(io.StringIO(out.read_text(), newline="")))
    assert rows[0] == ["order", "l1_error"] and len(rows) == 9
    assert json.loads(js.read_text())["result"]["strictly_decreasing"] is True
    assert main(["approx", "fourier", "identity", "--orders", "1", "2", "4", "8", "16", "--out", str(out)]) == 0
    assert main(["approx", "taylor", "cubic", "--orders", "3", "4", "5", "--out", str(out)]) == 0
    errs = [float(r[1]) for r in list(csv.reader(io.StringIO(out.read_text(), newline="")))[1:]]
    assert max(errs) <= 2e-12
    assert main(["approx", "taylor", "cos2pi", "--orders", "0", "2", "--out", str(out)]) == 2
    assert main(["approx", "taylor", "exp", "--orders", "3", "1", "--out", str(out)]) == 1


def test_usage_errors():
    assert main([]) == 1
    assert main(["laws", "nosuch"]) == 1
    assert main(["--help"]) == 0
