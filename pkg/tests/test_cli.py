import json
import subprocess
import sys

import pytest

from algstar.cli import RunConfig, config_from_args, main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_all_default(capsys):
    code, out, _ = run(capsys, "verify-all")
    rep = json.loads(out)
    assert code == 0 and rep["schema"] == 1 and rep["ok"]


def test_verify_all_bad_radius(capsys):
    code, _, err = run(capsys, "verify-all", "--nu", "4", "--kappa0", "-1", "--R", "2")
    assert code == 2 and "V(R) > 1" in err


def test_verify_all_injected(capsys):
    code, out, _ = run(capsys, "verify-all", "--inject-perturbation")
    assert code == 1
    assert json.loads(out)["sections"]["catalog"]["failures"]


def test_catalog_commands(capsys):
    code, out, _ = run(capsys, "catalog", "--degree", "0", "--order", "0")
    assert code == 0 and [e["family"] for e in json.loads(out)["entries"]] == ["Fn-A", "Fn-B"]
    code, out, _ = run(capsys, "catalog", "list", "--degree", "2", "--order", "1", "--gens", "iota")
    assert code == 0 and json.loads(out)["entries"] == []
    code, out, _ = run(capsys, "catalog", "--degree", "1", "--order", "0", "--gens", "zeta:1,1,0")
    assert code == 0 and json.loads(out)["contains_dtheta2"]
    code, _, _ = run(capsys, "catalog", "--degree", "1", "--order", "0", "--gens", "bogus")
    assert code == 2


def test_inequalities(capsys):
    code, out, _ = run(capsys, "inequalities", "run", "--suite", "hardy", "--seed", "7")
    rep = json.loads(out)
    assert code == 0 and len(rep["suites"]["hardy"]["cases"]) == 50
    code, out, _ = run(capsys, "inequalities", "--suite", "claim2", "--seed", "7", "--mu", "0.5")
    assert code == 0 and {c["mu"] for c in json.loads(out)["suites"]["claim2"]["cases"]} == {0.5}
    assert run(capsys, "inequalities", "--suite", "hardy", "--alpha", "-1")[0] == 2
    assert run(capsys, "inequalities", "--suite", "claim2", "--mu", "1")[0] == 2


def test_determinism(capsys, monkeypatch):
    args = ["inequalities", "--suite", "claim2", "--seed", "11", "--cases", "6"]
    first = run(capsys, *args)[1]
    monkeypatch.setenv("ALGSTAR_THREADS", "3")
    second = run(capsys, *args)[1]
    assert first == second


def test_geometry_and_quotient(capsys):
    code, out, _ = run(capsys, "geometry", "report")
    assert code == 0 and json.loads(out)["report"]["E"]["ricci_flat"]
    code, out, _ = run(capsys, "quotient", "check", "--nu", "4", "--gens", "xi:2,zeta:2,2,3,iota:2,1/3")
    rep = json.loads(out)
    assert code == 0 and rep["relations"]["ok"] and rep["isometry_ok"]
    assert rep["w1"]["dimension"] == 0
    assert run(capsys, "quotient", "--nu", "3", "--gens", "iota")[0] == 2


def test_csv_and_out(capsys, tmp_path):
    path = tmp_path / "rep.csv"
    code, out, _ = run(capsys, "catalog", "--degree", "0", "--order", "1", "--csv", "--out", str(path))
    assert code == 0 and out == ""
    text = path.read_text()
    assert text.startswith("key,value\n") and "entries[0].family" in text


def test_config_roundtrip(tmp_path):
    cfg = config_from_args(["inequalities", "--suite", "hardy", "--seed", "3", "--alpha", "2", "--nu", "4",
                            "--kappa0", "0", "--R", "10"])
    again = RunConfig.from_dict(json.loads(json.dumps(cfg.to_dict())))
    assert again == cfg
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_dict()))
    loaded = config_from_args(["inequalities", "--config", str(path)])
    assert loaded == cfg
    overridden = config_from_args(["inequalities", "--config", str(path), "--seed", "9"])
    assert overridden.seed == 9 and overridden.options == cfg.options


def test_bad_config(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "geometry", "--config", str(path))[0] == 2
    assert run(capsys, "nonsense")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "algstar", "catalog", "--degree", "0", "--order", "0"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["schema"] == 1
