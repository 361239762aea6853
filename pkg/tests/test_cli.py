import json
from pathlib import Path

import jsonschema
import pytest

from softpi.cli import infer_calculus, main
from softpi.corpus import OMEGA, OMEGA_BANG, SERVER_BOX
from softpi.parser import load
from softpi.reduction import congruent

ROOT = Path(__file__).resolve().parent.parent
SCHEMA = json.loads((ROOT / "docs" / "schema.json").read_text())
CORPUS = ROOT / "corpus"


def validate(obj, name):
    jsonschema.validate(obj, {**SCHEMA, "$ref": f"#/$defs/{name}"})


def cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_server_box(capsys):
    code, out, _ = cli(capsys, "check", CORPUS / "server_box.pi", "--calculus", "eshopi", "--ic", "b")
    d = json.loads(out)
    validate(d, "check")
    assert code == 0 and d["ok"]
    assert set(d["classifications"].values()) == {"bang", "dang", "dies"}


def test_check_omega_bang_shopi(capsys):
    code, out, _ = cli(capsys, "check", CORPUS / "omega_bang.pi", "--calculus", "shopi")
    d = json.loads(out)
    validate(d, "check")
    assert code == 1 and not d["ok"]
    assert d["failure"]["site"].startswith("x@")


def test_check_auto(capsys):
    code, out, _ = cli(capsys, "check", CORPUS / "soft_chain.pi")
    assert code == 0 and json.loads(out)["calculus"] == "shopi"
    assert infer_calculus(OMEGA) == "hopi"
    assert infer_calculus(OMEGA_BANG) == "lhopi"
    assert infer_calculus(SERVER_BOX, {"b"}) == "eshopi"


def test_run_verify(capsys):
    code, out, _ = cli(capsys, "run", CORPUS / "soft_chain.pi", "--verify")
    d = json.loads(out)
    validate(d, "run")
    assert code == 0 and d["exhausted"] and d["verification"]["ok"]
    assert d["length"] == len(d["steps"]) > 0


def test_run_random_reproducible(capsys):
    args = ("run", CORPUS / "server_box.pi", "--ic", "b", "--strategy", "random", "--seed", "3")
    _, a, _ = cli(capsys, *args)
    _, b, _ = cli(capsys, *args)
    assert a == b


def test_run_omega_bounded(capsys):
    code, out, _ = cli(capsys, "run", CORPUS / "omega.pi", "--max-steps", "6")
    d = json.loads(out)
    validate(d, "run")
    assert code == 0 and d["length"] == 6 and not d["exhausted"]


def test_run_rejects_ill_formed(capsys):
    code, out, _ = cli(capsys, "run", CORPUS / "omega_bang.pi", "--calculus", "shopi")
    d = json.loads(out)
    validate(d, "run_rejected")
    assert code == 1 and not d["check"]["ok"]


def test_metrics(capsys):
    code, out, _ = cli(capsys, "metrics", CORPUS / "server_box.pi", "--ic", "b")
    d = json.loads(out)
    validate(d, "metrics")
    assert code == 0
    assert (d["size"], d["bd"], d["df"], d["wei"], d["webi"], d["pgr"]) == (30, 2, 2, 52, 28, 30)
    _, out, _ = cli(capsys, "metrics", CORPUS / "nil.pi")
    assert "webi" not in json.loads(out)


def test_embed(capsys, tmp_path):
    code, out, _ = cli(capsys, "embed", CORPUS / "server.pi")
    assert code == 0 and out.startswith("-- image of server.pi")
    dest = tmp_path / "img.pi"
    assert cli(capsys, "embed", CORPUS / "omega.pi", "--out", dest)[0] == 0
    assert congruent(load(dest), OMEGA_BANG)
    code, _, err = cli(capsys, "embed", CORPUS / "omega_bang.pi")
    assert code == 1 and "not an HOpi term" in err


def test_explore_and_dot(capsys, tmp_path):
    dot = tmp_path / "g.dot"
    code, out, _ = cli(capsys, "explore", CORPUS / "server_box.pi", "--dot", dot)
    d = json.loads(out)
    validate(d, "explore")
    assert code == 0 and not d["truncated"] and not d["has_cycle"]
    text = dot.read_text()
    assert text.startswith("digraph") and text.count("->") == len(d["edges"])


def test_explore_budget(capsys):
    _, out, _ = cli(capsys, "explore", CORPUS / "omega.pi", "--budget", "4")
    d = json.loads(out)
    assert d["truncated"] and len(d["nodes"]) <= 4


def test_simulate(capsys):
    code, out, _ = cli(capsys, "simulate", CORPUS / "server.pi", "--depth", "4")
    d = json.loads(out)
    validate(d, "simulate")
    assert code == 0 and d["ok"]
    code, _, _ = cli(capsys, "simulate", CORPUS / "server_box.pi")
    assert code == 1


def test_fuzz_roundtrip(capsys, tmp_path):
    dest = tmp_path / "f.pi"
    assert cli(capsys, "fuzz", "--seed", "22", "--size", "30", "--out", dest)[0] == 0
    assert load(dest) == load(CORPUS / "fuzzed_soft.pi")


def test_parse_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.pi"
    bad.write_text("a<*>.\n")
    code, _, err = cli(capsys, "check", bad)
    assert code == 2 and "bad.pi:2:1" in err
    assert cli(capsys, "check", tmp_path / "missing.pi")[0] == 2


def test_usage_error():
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_open_term_run(capsys, tmp_path):
    f = tmp_path / "open.pi"
    f.write_text("(x *)\n")
    code, _, err = cli(capsys, "run", f, "--calculus", "hopi")
    assert code == 1 and "free variables" in err
