import json
import subprocess
import sys

import pytest

from lukmodal.cli import run
from lukmodal.io import algebra_from_json, frame_from_json, model_from_json

EMPTY2 = {"n": 2, "signature": {"box": 1}, "worlds": ["u"], "relations": {"box": []}, "r": {"1": [], "2": ["u"]}}
REFL = {"signature": {"box": 1}, "worlds": ["w"], "relations": {"box": [["w", "w"]]}}


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, data in (("empty", EMPTY2), ("refl", REFL)):
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(data))
        paths[name] = str(p)
    model = dict(REFL, grain=2, valuation={"w": {"p": "1/2"}})
    p = tmp_path / "model.json"
    p.write_text(json.dumps(model))
    paths["model"] = str(p)
    paths["dir"] = tmp_path
    return paths


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_valid_on_empty_relation_frame(capsys, files):
    code, out, _ = call(capsys, "valid", "--frame", files["empty"], "--formula", "box(p \\/ ~p)")
    assert code == 0 and out.startswith("valid")


def test_validn_countermodel(capsys, files):
    code, out, _ = call(capsys, "validn", "--frame", files["refl"], "--n", "2", "--formula", "box(p \\/ ~p)", "--json")
    data = json.loads(out)
    assert code == 1 and data["countermodel"]["valuation"]["w"]["p"] == "1/2"
    model, _ = model_from_json(data["countermodel"])
    assert model.n == 2


def test_eval(capsys, files):
    code, out, _ = call(capsys, "eval", "--model", files["model"], "--formula", "box(p \\/ ~p)", "--json")
    assert code == 0 and json.loads(out)["values"]["box(p \\/ ~p)"] == {"w": "1/2"}


def test_tau_and_imterm(capsys):
    code, out, _ = call(capsys, "tau", "--n", "2", "--i", "1")
    assert code == 0 and out.splitlines()[0] == "(x (+) x)" and "1/2 -> 1" in out
    code, out, _ = call(capsys, "imterm", "--n", "6", "--m", "3", "--json")
    assert code == 0 and json.loads(out)["table"]["1/3"] == "1"
    assert call(capsys, "imterm", "--n", "6", "--m", "4")[0] == 2


def test_closure_examples(capsys):
    code, out, _ = call(capsys, "closure", "--class", "C1", "--n", "2", "--k", "1", "--max-worlds", "2", "--ops", "bounded-image", "--json")
    data = json.loads(out)
    assert code == 1 and data["construction"] == "bounded-image"
    F, G = (frame_from_json(f) for f in data["frames"])
    assert F.r[1] == set() and G.r[1] == set(G.worlds)
    code, _, _ = call(capsys, "closure", "--class", "all", "--n", "2", "--enriched", "--max-worlds", "1")
    assert code == 0
    assert call(capsys, "closure", "--class", "C1", "--n", "2", "--ops", "sideways")[0] == 2


def test_algebra_pipeline(capsys, files):
    out_path = str(files["dir"] / "alg.json")
    assert call(capsys, "complex", "--frame", files["refl"], "--n", "2", "--out", out_path)[0] == 0
    A = algebra_from_json(json.loads(open(out_path).read()))
    assert A.size == 3
    assert call(capsys, "axioms", "--algebra", out_path)[0] == 0
    code, out, _ = call(capsys, "homs", "--algebra", out_path, "--json")
    assert code == 0 and json.loads(out)["homomorphisms"] == [[0, 1, 2]]
    code, out, _ = call(capsys, "tight", "--frame", files["empty"])
    assert code == 0 and json.loads(out)["coordinates"] == [{"label": "u", "grain": 2}]
    code, out, _ = call(capsys, "canext", "--frame", files["empty"], "--json")
    assert code == 0 and json.loads(out)["isomorphism"] is True


def test_filtroid_cli(capsys):
    assert call(capsys, "filtroid", "--action", "theorem", "--lattice", "chain:2", "--k", "2")[0] == 0
    assert call(capsys, "filtroid", "--action", "theorem", "--lattice", "boolean:2", "--seeds", "10", "--seed", "1")[0] == 0
    assert call(capsys, "filtroid", "--members", "1,0;0,1;1,1")[0] == 0
    assert call(capsys, "filtroid", "--members", "0,0")[0] == 1
    code, out, _ = call(capsys, "filtroid", "--action", "close", "--members", "0,0", "--json")
    assert code == 0 and len(json.loads(out)["members"]) == 4
    assert call(capsys, "filtroid", "--lattice", "cube:2")[0] == 2


def test_universe_commands(capsys):
    code, out, _ = call(capsys, "modset", "--formula", "box(p \\/ ~p)", "--n", "2", "--max-worlds", "2", "--json")
    data = json.loads(out)
    assert code == 0 and data["total"] == 18 and len(data["members"]) == 2
    code, par, _ = call(capsys, "modset", "--formula", "box(p \\/ ~p)", "--n", "2", "--max-worlds", "2", "--json", "--jobs", "2")
    assert par == out
    code, out, _ = call(capsys, "enumerate", "--n", "2", "--enriched", "--count")
    assert code == 0 and out.strip() == "52"
    code, a, _ = call(capsys, "enumerate", "--max-worlds", "2", "--sample", "3", "--seed", "5", "--json")
    _, b, _ = call(capsys, "enumerate", "--max-worlds", "2", "--sample", "3", "--seed", "5", "--json")
    assert a == b and len(json.loads(a)) == 3
    code, out, _ = call(capsys, "godequiv", "--class", "reflexive", "--n", "2", "--json")
    assert code == 0 and json.loads(out)["agree"] is True


def test_syntax_commands(capsys):
    code, out, _ = call(capsys, "parse", "--formula", "p (+) q", "--json")
    assert code == 0 and json.loads(out)[0]["desugared"] == "~p -> q"
    code, out, _ = call(capsys, "trn", "--formula", "box(p -> q)", "--m", "3")
    assert code == 0 and out.strip() == "box(p^3 -> q^3)"
    assert call(capsys, "parse", "--formula", "p ->")[0] == 2


def test_exit_codes(capsys, files):
    assert call(capsys, "valid", "--frame", files["refl"], "--formula", "p")[0] == 2
    assert call(capsys, "nosuch")[0] == 2
    assert call(capsys, "valid", "--frame", "/nonexistent.json", "--formula", "p")[0] == 2
    code = run(["validn", "--frame", files["refl"], "--n", "9", "--formula", "p -> q -> r -> s -> t -> x -> y -> z", "--budget", "100"])
    assert code == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lukmodal", "tau", "--n", "3", "--i", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and "2/3 -> 1" in proc.stdout
