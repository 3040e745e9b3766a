import json
import subprocess
import sys

import pytest

from affq import cli
from affq.catalog import MinAffParams
from affq.lattice import QPolynomial, iota
from affq.paths import qchar_minaff

from conftest import A3


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_qchar_mass_matches_weyl_oracle(capsys):
    code, out, _ = run(capsys, "qchar", "-t", "A", "-n", "3", "--s", "-3", "--k", "1,1,0", "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["mass"] == 20  # dim of the sl4 module with highest weight w1 + w2
    assert QPolynomial.from_json_obj(obj["qchar"]) == qchar_minaff(MinAffParams(A3, -3, (1, 1, 0)))


def test_qchar_trivial_and_dual(capsys):
    assert run(capsys, "qchar", "-t", "A", "-n", "3", "--k", "0,0,0")[1] == "1\n"
    _, plain, _ = run(capsys, "qchar", "-t", "A", "-n", "3", "--s", "1", "--k", "1,0,1")
    _, dual, _ = run(capsys, "qchar", "-t", "A", "-n", "3", "--s", "1", "--k", "1,0,1", "--dual")
    assert QPolynomial.parse(dual.strip()) == iota(A3, QPolynomial.parse(plain.strip()))


def test_qchar_engine_both(capsys):
    assert run(capsys, "qchar", "-t", "B", "-n", "2", "--s", "-1", "--k", "1,2", "--engine", "both")[0] == 0


def test_exit_codes(capsys, monkeypatch):
    assert run(capsys, "qchar", "-t", "A", "-n", "3", "--k", "1,1")[0] == 4
    assert run(capsys, "qchar", "-t", "Q", "-n", "3", "--k", "1,1,0")[0] == 4
    assert run(capsys, "qchar", "-t", "A", "-n", "3", "--k", "2,2,2", "--budget", "10")[0] == 3
    assert run(capsys, "qchar", "-t", "A", "-n", "3", "--k", "2,2,2", "--engine", "fm",
               "--budget", "10")[0] == 3
    monkeypatch.setattr(cli, "fm_qchar_dict", lambda alg, top, budget=None: {(): 1})
    assert run(capsys, "qchar", "-t", "A", "-n", "3", "--k", "1,1,0", "--engine", "both")[0] == 2


def test_budget_env_overrides(capsys, monkeypatch):
    monkeypatch.setenv("AFFQ_BUDGET", "5")
    assert run(capsys, "qchar", "-t", "A", "-n", "3", "--k", "1,1,0", "--budget", "100000")[0] == 3


def test_verify_examples(capsys):
    code, out, _ = run(capsys, "verify", "examples")
    assert code == 0 and out.strip().endswith("12/12 identities verified")
    code, out, _ = run(capsys, "verify", "examples", "--dual", "--json")
    assert code == 0
    assert all(r["ok"] for r in json.loads(out)["reports"])


def test_verify_empty_grid(capsys):
    code, out, _ = run(capsys, "verify", "grid", "-t", "A", "-n", "3", "--max-entry", "0", "--json")
    assert code == 0 and json.loads(out)["reports"] == []


def test_verify_msystem_dual(capsys):
    assert run(capsys, "verify", "msystem", "-t", "B", "-n", "2", "--s", "-3", "--k", "1,2", "--dual")[0] == 0


def test_config_files_and_precedence(tmp_path, capsys):
    toml = tmp_path / "c.toml"
    toml.write_text('type = "A"\nn = 3\nk = "1,1,0"\ns = -3\njson = true\n')
    code, out, _ = run(capsys, "qchar", "--config", str(toml))
    assert code == 0 and json.loads(out)["mass"] == 20
    code, out, _ = run(capsys, "qchar", "--config", str(toml), "--k", "1,0,0")
    assert json.loads(out)["mass"] == 4
    js = tmp_path / "c.json"
    js.write_text(json.dumps({"type": "B", "n": 2, "k": [0, 1]}))
    code, out, _ = run(capsys, "qchar", "--config", str(js))
    assert code == 0 and out.count("+") == 3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": 1}))
    assert run(capsys, "qchar", "--config", str(bad))[0] == 4


def test_mutate_target_and_dot(tmp_path, capsys):
    code, out, _ = run(capsys, "mutate", "-t", "A", "-n", "3", "--target", "1,1,0", "--depth", "8",
                       "--verify-qchar", "--dot", str(tmp_path))
    assert code == 0
    assert "found at column 1, level 1" in out
    dots = sorted(p.name for p in tmp_path.iterdir())
    assert dots[0] == "step_000.dot" and len(dots) == 1 + 8
    assert (tmp_path / "step_001.dot").read_text().startswith("digraph step_001")


def test_mutate_zero_length_dumps_initial_seed(capsys):
    code, out, _ = run(capsys, "mutate", "-t", "B", "-n", "2", "--columns", "", "--depth", "4", "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["steps"] == [] and obj["columns"] == []
    from affq.cluster import initial_seed
    from conftest import B2
    assert obj["final"] == json.loads(json.dumps(initial_seed(B2, 4).state_json_obj()))


def test_mutate_bad_columns(capsys):
    assert run(capsys, "mutate", "-t", "A", "-n", "3", "--columns", "1,7")[0] == 4
    assert run(capsys, "mutate", "-t", "A", "-n", "3")[0] == 4


@pytest.mark.parametrize("argv", [
    ["qchar", "-t", "B", "-n", "3", "--s", "1", "--k", "1,0,1", "--json"],
    ["mutate", "-t", "B", "-n", "2", "--target", "1,2", "--json"],
    ["verify", "grid", "-t", "B", "-n", "2", "--max-entry", "1", "--json"],
])
def test_deterministic_output(argv):
    cmd = [sys.executable, "-m", "affq.cli", *argv]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a


def test_parallel_jobs_match_serial(capsys):
    base = ["verify", "grid", "-t", "A", "-n", "3", "--max-entry", "1", "--json"]
    _, serial, _ = run(capsys, *base)
    _, par, _ = run(capsys, *base, "--jobs", "2")
    strip = lambda text: [{k: v for k, v in r.items() if k != "wall_time"} for r in json.loads(text)["reports"]]
    assert strip(serial) == strip(par)
