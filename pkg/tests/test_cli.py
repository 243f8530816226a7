"""Command line behavior: output, exit codes, reports, witnesses."""

import json

import pytest

from cfworlds.cli import main
from cfworlds.models import Signature, make_model, save_model, table_from_fn
from cfworlds.structures import load_structure
from cfworlds.suite import fixture_path

TSTAR = str(fixture_path("tstar.json"))
FOREST = str(fixture_path("forestfire.json"))
C5_STRUCT = str(fixture_path("example-c5.json"))
LEMMA = str(fixture_path("lemma-a1.json"))
NEGPHI = str(fixture_path("neg-phi.json"))


def run(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def test_solve_intervened(capsys):
    rc, out, _ = run(capsys, "solve", "--model", TSTAR,
                     "--context", "U=0", "--set", "X2<-1")
    assert rc == 0
    assert out == "(0,1,1)\n"


def test_solve_unintervened(capsys):
    rc, out, _ = run(capsys, "solve", "--model", TSTAR, "--context", "U=0")
    assert rc == 0
    assert out == "(0,0,0)\n"


def test_solve_no_solution(capsys, tmp_path):
    sig = Signature(("U",), ("X1", "X2"),
                    {"U": (0, 1), "X1": (0, 1), "X2": (0, 1)})
    clash = make_model(sig, {
        "X1": table_from_fn(sig, "X1", lambda env: 1 - env["X2"]),
        "X2": table_from_fn(sig, "X2", lambda env: env["X1"]),
    })
    path = tmp_path / "clash.json"
    save_model(clash, path)
    rc, out, _ = run(capsys, "solve", "--model", str(path), "--context", "U=0")
    assert rc == 1
    assert out == "no solution\n"


def test_solve_usage_errors(capsys):
    rc, _, err = run(capsys, "solve", "--model", TSTAR, "--context", "U=5")
    assert rc == 2 and "context value" in err
    rc, _, err = run(capsys, "solve", "--model", TSTAR, "--context", "U=0",
                     "--set", "X9<-1")
    assert rc == 2 and "X9" in err
    rc, _, err = run(capsys, "solve", "--model", "/nonexistent.json",
                     "--context", "U=0")
    assert rc == 2 and "cannot read model" in err


def test_eval_on_model(capsys):
    rc, out, _ = run(capsys, "eval", "--model", TSTAR, "--context", "U=0",
                     "--formula", "[X2<-1]X3=1")
    assert rc == 0 and out == "true\n"
    rc, out, _ = run(capsys, "eval", "--model", TSTAR, "--context", "U=0",
                     "--formula", "[X2<-1]X3=0")
    assert rc == 1 and out == "false\n"


def test_eval_on_structure(capsys):
    rc, out, _ = run(capsys, "eval", "--structure", C5_STRUCT, "--world", "000",
                     "--formula", "[X1<-1; X3<-1]X2=1 & [X1<-1; X2<-1]X3=1")
    assert rc == 0 and out == "true\n"
    rc, out, _ = run(capsys, "eval", "--structure", C5_STRUCT, "--world", "000",
                     "--formula", "[X1<-1]X2=1")
    assert rc == 1 and out == "false\n"


def test_eval_usage_errors(capsys):
    rc, _, err = run(capsys, "eval", "--model", TSTAR, "--context", "U=0",
                     "--formula", "[X1<-1](X2=1")
    assert rc == 2
    assert "bad formula" in err and "position" in err
    rc, _, err = run(capsys, "eval", "--model", TSTAR, "--formula", "X1=1")
    assert rc == 2 and "--context" in err
    rc, _, err = run(capsys, "eval", "--structure", C5_STRUCT,
                     "--formula", "X1=1")
    assert rc == 2 and "--world" in err
    rc, _, err = run(capsys, "eval", "--structure", C5_STRUCT, "--world", "zz",
                     "--formula", "X1=1")
    assert rc == 2 and "unknown world" in err


def test_classify_outputs(capsys):
    rc, out, _ = run(capsys, "classify", "--formula", "[X1<-1](X2=1 & X3=0)")
    assert rc == 0 and out == "LEX\n"
    rc, out, _ = run(capsys, "classify", "--model", TSTAR)
    assert rc == 0
    assert out == "Tun-only (unique solutions: True, recursive: False)\n"
    rc, out, _ = run(capsys, "classify", "--structure", C5_STRUCT)
    assert rc == 0
    assert "acceptable: True" in out and "recursive: False" in out


def test_translate_model_to_structure(capsys, tmp_path):
    out_path = tmp_path / "ff-structure.json"
    rc, out, _ = run(capsys, "translate", "--to", "structure",
                     "--in", FOREST, "--out", str(out_path), "--certify")
    assert rc == 0
    assert out.startswith("certified on ")
    struct = load_structure(out_path)
    assert len(struct.worlds) == 32


def test_translate_refuses_cyclic_model(capsys):
    rc, _, err = run(capsys, "translate", "--to", "structure", "--in", TSTAR)
    assert rc == 1
    assert "translation failed" in err


def test_translate_refuses_non_recursive_structure(capsys):
    rc, _, err = run(capsys, "translate", "--to", "model",
                     "--in", C5_STRUCT, "--world", "000")
    assert rc == 1
    assert "translation failed" in err
    rc, _, err = run(capsys, "translate", "--to", "model", "--in", C5_STRUCT)
    assert rc == 2 and "--world" in err


def test_prove_fixtures(capsys):
    rc, out, _ = run(capsys, "prove", "--script", LEMMA)
    assert rc == 0 and out.startswith("Verified: ")
    rc, out, _ = run(capsys, "prove", "--script", NEGPHI)
    assert rc == 0 and out.startswith("Verified: ")


def test_prove_reports_failing_line(capsys, tmp_path):
    data = json.loads(open(NEGPHI).read())
    data["base"]["axioms"] = [a for a in data["base"]["axioms"] if a != "A4"]
    ablated = tmp_path / "ablated.json"
    ablated.write_text(json.dumps(data))
    rc, out, _ = run(capsys, "prove", "--script", str(ablated))
    assert rc == 1
    assert out.startswith("line 35: SchemaDisabled")


def test_prove_bad_script(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"lines": [{"formula": "p=1", "by": {"kind": "zz"}}]}')
    rc, _, err = run(capsys, "prove", "--script", str(bad))
    assert rc == 2 and "bad proof script" in err


def test_axcheck_exhaustive(capsys):
    rc, out, _ = run(capsys, "axcheck", "--schema", "C5", "--class", "Mrec")
    assert rc == 0
    assert out.startswith("valid at the bound")
    rc, out, _ = run(capsys, "axcheck", "--schema", "C5", "--class", "M_f+")
    assert rc == 1
    assert out.startswith("countermodel for ")


def test_axcheck_random(capsys, tmp_path):
    rc, _, err = run(capsys, "axcheck", "--schema", "C5", "--class", "Mrec",
                     "--vars", "3", "--mode", "random", "--budget", "5")
    assert rc == 2 and "--seed" in err

    report = tmp_path / "run.json"
    rc, out, _ = run(capsys, "axcheck", "--schema", "C5", "--class", "M_f+",
                     "--vars", "3", "--mode", "random", "--budget", "200",
                     "--seed", "7", "--report", str(report))
    assert rc == 1
    assert out.startswith("countermodel for ")
    data = json.loads(report.read_text())
    assert set(data) == {"subcommand", "inputs", "verdict", "witnesses",
                         "seconds", "seed", "details"}
    assert data["verdict"] == "countermodel"
    assert data["seed"] == 7
    witness = tmp_path / "run.countermodel.json"
    assert data["witnesses"] == [str(witness)]
    assert len(load_structure(witness).worlds) == 8


def test_axcheck_usage_errors(capsys):
    rc, _, err = run(capsys, "axcheck", "--schema", "ZZ", "--class", "M")
    assert rc == 2 and "unknown schema" in err
    rc, _, err = run(capsys, "axcheck", "--schema", "C5", "--class", "Zed")
    assert rc == 2 and "unknown class" in err
    rc, _, err = run(capsys, "axcheck", "--schema", "A1", "--class", "Tun")
    assert rc == 2 and "structure classes" in err
    rc, _, err = run(capsys, "axcheck", "--schema", "C5", "--class", "M")
    assert rc == 2 and "assignment" in err


def test_report_records_inputs(capsys, tmp_path):
    report = tmp_path / "eval.json"
    rc, _, _ = run(capsys, "eval", "--model", TSTAR, "--context", "U=0",
                   "--formula", "X1=0", "--report", str(report))
    assert rc == 0
    data = json.loads(report.read_text())
    assert data["subcommand"] == "eval"
    assert data["verdict"] == "true"
    assert len(data["inputs"][TSTAR]) == 64
    assert data["details"]["formula"] == "X1=0"
