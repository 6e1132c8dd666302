from __future__ import annotations

import io
import json
import subprocess
import sys

from closurium.cli import main
from closurium.formats import read_pgm
from closurium.sequent import random_derivation


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def test_check_kripke_value(models_dir):
    code, out, _ = run("check", "-m", models_dir / "four.json", "-f", "C(a)")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"] == [0, 1, 2, 3]
    assert doc["kind"] == "powerset" and doc["seed"] == 0 and "version" in doc


def test_syntax_error_exit(models_dir):
    code, _, err = run("check", "-m", models_dir / "four.json", "-f", "a U")
    assert code == 2 and "byte 3" in err


def test_unknown_atom_and_missing_file(models_dir, tmp_path):
    assert run("check", "-m", models_dir / "four.json", "-f", "zz")[0] == 2
    assert run("check", "-m", tmp_path / "nope.json", "-f", "a")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("check", "-m", bad, "-f", "a")[0] == 2


def test_pgm_output(models_dir, tmp_path):
    target = tmp_path / "s.pgm"
    code, _, _ = run("check", "-m", models_dir / "grid.json", "-f", "a S b", "--format", "pgm", "-o", target)
    assert code == 0
    pixels = read_pgm(target)
    assert pixels.shape == (8, 8)
    assert sorted(zip(*(pixels == 255).nonzero())) == [(3, 3), (3, 4), (4, 3), (4, 4)]


def test_pgm_needs_grid(models_dir, tmp_path):
    code, _, err = run("check", "-m", models_dir / "four.json", "-f", "a", "--format", "pgm", "-o", tmp_path / "x")
    assert code == 3 and "grid" in err


def test_dot_and_table(models_dir):
    code, out, _ = run("check", "-m", models_dir / "chain3.json", "-f", "a U b", "--format", "dot")
    assert code == 0 and '"0" [fillcolor=lightblue]' in out and '"0" -> "1"' in out
    code, out, _ = run("check", "-m", models_dir / "chain3.json", "-f", "a U b", "--format", "table")
    assert code == 0 and out.splitlines()[1:] == ["0\t1", "1\t0", "2\t0"]
    code, out, _ = run("check", "-m", models_dir / "fuzzy.json", "-f", "B(f)", "--format", "table")
    assert out.splitlines()[1] == "p\t2/10"


def test_result_feeds_back_as_atom(models_dir, tmp_path):
    first = tmp_path / "r.json"
    assert run("check", "-m", models_dir / "chain3.json", "-f", "a U b", "-o", first)[0] == 0
    code, out, _ = run("check", "-m", models_dir / "chain3.json", "-f", "C(u)", "--atom", f"u={first}")
    assert code == 0 and json.loads(out)["result"] == [0, 1]
    fz = tmp_path / "f.json"
    run("check", "-m", models_dir / "fuzzy.json", "-f", "C(f)", "-o", fz)
    code, out, _ = run("check", "-m", models_dir / "fuzzy.json", "-f", "g", "--atom", f"g={fz}")
    assert json.loads(out)["result"] == json.loads(fz.read_text())["result"]


def test_formula_file(models_dir, tmp_path):
    f = tmp_path / "phi.txt"
    f.write_text("C(a) & !a\n")
    code, out, _ = run("check", "-m", models_dir / "four.json", "--formula-file", f)
    assert json.loads(out)["result"] == [0, 1]


def test_laws(models_dir):
    code, out, _ = run("laws", "-m", models_dir / "four.json")
    doc = json.loads(out)
    assert code == 0
    assert doc["laws"]["additive"] == {"status": "fails", "witness": [[2], [3]]}
    code, out, _ = run("laws", "-m", models_dir / "four-suc.json", "--format", "table")
    rows = dict(line.split("\t")[:2] for line in out.splitlines()[1:])
    assert rows["grounded"] == "holds" and rows["fully_additive"] == "holds"
    code, out, _ = run("laws", "-m", models_dir / "markov.json", "--laws", "grounded,monotone")
    assert set(json.loads(out)["laws"]) == {"grounded", "monotone"}
    assert run("laws", "-m", models_dir / "four.json", "--laws", "bogus")[0] == 2


def test_laws_reject_non_monotone_table(tmp_path):
    model = tmp_path / "bad.json"
    model.write_text(json.dumps({"type": "explicit", "n": 3, "mode": "full", "closure": [
        [[], []], [[0], [0, 1]], [[1], [1]], [[2], [2]], [[0, 1], [0, 1]],
        [[0, 2], [0, 2]], [[1, 2], [1, 2]], [[0, 1, 2], [0, 1, 2]]]}))
    code, _, err = run("laws", "-m", model)
    assert code == 2 and "not-monotone" in err


def test_caps(models_dir, monkeypatch):
    code, _, err = run("laws", "-m", models_dir / "four.json", "--cap", "4")
    assert code == 3 and "cap" in err
    monkeypatch.setenv("CLOSURIUM_CAP", "4")
    assert run("laws", "-m", models_dir / "four.json")[0] == 3
    assert run("laws", "-m", models_dir / "four.json", "--cap", "100")[0] == 0
    monkeypatch.setenv("CLOSURIUM_CAP", "many")
    assert run("laws", "-m", models_dir / "four.json")[0] == 2


def test_prove(models_dir, tmp_path):
    code, out, _ = run("prove", models_dir / "cl1.json")
    assert code == 0 and out.splitlines()[1].startswith("valid")
    corrupt = json.loads((models_dir / "cl1.json").read_text())
    corrupt["rule"] = "Cl-9"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(corrupt))
    code, _, err = run("prove", bad)
    assert code == 4 and "root" in err


def test_prove_against_models(models_dir, tmp_path):
    proof = tmp_path / "p.json"
    proof.write_text(random_derivation(5, depth=5).dumps())
    names = ["four.json", "four-suc.json", "chain3.json", "grid.json", "markov.json"]
    # the random proof uses atoms a, b, c; give every model all three
    paths = []
    for name in names:
        desc = json.loads((models_dir / name).read_text())
        if desc["type"] == "grid":
            desc["atoms"] = {"a": [[0, 0]], "b": [[1, 1]], "c": []}
        else:
            pts = desc.get("points")
            desc["atoms"] = {"a": pts[:1], "b": pts[1:2], "c": pts[-1:]}
        target = tmp_path / name
        target.write_text(json.dumps(desc))
        paths += ["-m", target]
    code, out, _ = run("prove", proof, *paths)
    assert code == 0
    assert [line.split("\t")[1] for line in out.splitlines()[2:]] == ["satisfied"] * 5
    code, out, _ = run("prove", proof, *paths[:2], "--format", "json")
    assert json.loads(out)["models"][0]["satisfied"] is True


def test_prove_verbatim_counterexample_exits_4(models_dir, tmp_path):
    from test_sequent import cl2_counterexample
    proof = tmp_path / "cl2.json"
    proof.write_text(cl2_counterexample().dumps())
    model = tmp_path / "m.json"
    model.write_text(json.dumps({"type": "graph", "n": 3, "edges": [[0, 1], [1, 2]], "atoms": {"a": [0]}}))
    assert run("prove", proof, "-m", model)[0] == 4
    assert run("prove", proof, "-m", model, "--rules", "verbatim")[0] == 4
    assert run("prove", proof, "--rules", "verbatim")[0] == 0


def test_module_entry_point(models_dir):
    proc = subprocess.run([sys.executable, "-m", "closurium", "check", "-m", str(models_dir / "four.json"),
                           "-f", "C(a)", "--format", "table"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.splitlines()[1] == "0\t1"


def test_pgm_to_stdout(models_dir):
    proc = subprocess.run([sys.executable, "-m", "closurium", "check", "-m", str(models_dir / "grid.json"),
                           "-f", "a", "--format", "pgm"], capture_output=True)
    assert proc.returncode == 0 and proc.stdout.startswith(b"P5\n8 8\n255\n")
    assert len(proc.stdout) == len(b"P5\n8 8\n255\n") + 64
