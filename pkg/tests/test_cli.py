import json
import subprocess
import sys
from fractions import Fraction as Q
from pathlib import Path

import jsonschema
import pytest

from sl2loc.cli import classify, derive_table, main, parse_derive_table
from sl2loc.diagram import DiagramDoc, Edge, Node, build_diagram
from sl2loc.reps import Family
from sl2loc.tdo import LieWord, beta, glue_check

SCHEMA = json.loads((Path(__file__).resolve().parents[1] / "src/sl2loc/schema/diagram.schema.json").read_text())


def run(argv, tmp_path, name="out.txt"):
    out = tmp_path / name
    code = main(list(argv) + ["--out", str(out)])
    return code, out.read_text(encoding="utf-8") if out.exists() else ""


# derive --------------------------------------------------------------------------------


def test_derive_text(tmp_path):
    code, text = run(["derive", "--t", "2"], tmp_path)
    assert code == 0
    lines = text.splitlines()
    assert "E_0 = z^2*d - z" in lines
    assert "H_inf = -2*w*d + 1" in lines
    assert "casimir = 3" in lines


def test_derive_untwisted(tmp_path):
    _, text = run(["derive", "--t", "1"], tmp_path)
    assert "E_0 = z^2*d" in text.splitlines()
    assert "casimir = 0" in text.splitlines()


def test_derive_json_round_trip(tmp_path):
    code, text = run(["derive", "--t", "5", "--format", "json"], tmp_path)
    assert code == 0
    data = json.loads(text)
    assert data == derive_table(5)
    ops = parse_derive_table(data)
    assert ops["casimir"] == 24
    for letter in "EFH":
        g = beta(LieWord.letter(letter), 5)
        assert ops[letter].op0 == g.op0 and ops[letter].opinf == g.opinf
        assert glue_check(ops[letter])


# module ---------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "family,t,eta",
    [("VermaPoint", 2, "0"), ("Whittaker", 2, "1"), ("PrincipalOdd", 3, "0"), ("FiniteO", 4, "0"), ("DeltaInf", 1, "0")],
)
def test_module_outputs_are_deterministic_and_round_trip(family, t, eta, tmp_path):
    base = ["module", "--family", family, "--t", str(t), "--eta", eta, "--window", "12"]
    _, j1 = run(base + ["--format", "json"], tmp_path, "a.json")
    _, j2 = run(base + ["--format", "json"], tmp_path, "b.json")
    _, d1 = run(base + ["--format", "dot"], tmp_path, "a.dot")
    _, d2 = run(base + ["--format", "dot"], tmp_path, "b.dot")
    assert j1 == j2 and d1 == d2
    data = json.loads(j1)
    jsonschema.validate(data, SCHEMA)
    doc = DiagramDoc.from_json(j1)
    assert DiagramDoc.from_dot(d1) == doc
    assert doc.to_json() == j1 and doc.to_dot() == d1


def test_verma_ascii_chain(tmp_path):
    _, text = run(["module", "--family", "VermaPoint", "--t", "2", "--format", "ascii", "--window", "8"], tmp_path)
    chain = text.splitlines()[1]
    assert chain.startswith("m_0 <-E:-3- -F:1-> m_1 <-E:-4-")


def test_trivial_finite_module_diagram():
    doc = build_diagram("FiniteO", None, 1)
    assert doc.nodes == [Node(0, "u_0", "0")]
    assert doc.edges == []


def test_whittaker_dot_has_two_f_edges(tmp_path):
    _, text = run(["module", "--family", "Whittaker", "--t", "2", "--eta", "1", "--format", "dot", "--window", "8"], tmp_path)
    doc = DiagramDoc.from_dot(text)
    f_from_1 = sorted((e.dst, e.coeff) for e in doc.edges if e.op == "F" and e.src == 1)
    # F n_k = (t-1-k) n_(k+1) - eta n_(k+2) at t=2, k=1
    assert f_from_1 == [(3, "-1")]
    f_from_0 = sorted((e.dst, e.coeff) for e in doc.edges if e.op == "F" and e.src == 0)
    assert f_from_0 == [(1, "1"), (2, "-1")]


def test_module_text(tmp_path):
    code, text = run(["module", "--family", "PrincipalEven", "--t", "2", "--window", "8"], tmp_path)
    assert code == 0
    assert "E . n_k = (k) n_(k-1)" in text
    assert "F . n_k = (-k + 1) n_(k+1)" in text


def test_diagram_equality_ignores_order():
    a = DiagramDoc("X", 1, "0", "inf", [Node(1, "b_1", "0"), Node(0, "b_0", "0")], [Edge("F", 0, 1, "1"), Edge("E", 1, 0, "2")])
    b = DiagramDoc("X", 1, "0", "inf", [Node(0, "b_0", "0"), Node(1, "b_1", "0")], [Edge("E", 1, 0, "2"), Edge("F", 0, 1, "1")])
    assert a == b
    assert DiagramDoc.from_dot(a.to_dot()) == b


def test_dot_escaping_round_trip():
    doc = DiagramDoc("Odd \"name\"", 2, "3/2", "zero", [Node(0, 'p\\0', "1/2")], [], ["say \"hi\""], [{"k": "v,w"}])
    assert DiagramDoc.from_dot(doc.to_dot()) == doc


def test_schema_rejects_zero_coefficient():
    data = build_diagram("VermaPoint", None, 2, window=8).to_dict()
    data["edges"][0]["coeff"] = "0"
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(data, SCHEMA)


def test_unknown_schema_version():
    data = build_diagram("VermaPoint", None, 2, window=8).to_dict()
    data["schema_version"] = 99
    with pytest.raises(ValueError):
        DiagramDoc.from_dict(data)


# classify -------------------------------------------------------------------------------


@pytest.mark.parametrize(
    "family,t,eta,headline",
    [
        ("FiniteO", 4, 0, "L(3), dim 4, irreducible"),
        ("PrincipalEven", 1, 0, "P_+(0): sub dim 1, quotient D_+⊕D_−"),
        ("Whittaker", 3, 2, "Y(2,3), irreducible, Casimir 8"),
        ("VermaPoint", 2, 0, "M(-3), irreducible, highest weight -3"),
        ("DualVerma", 3, 0, "I(2): sub dim 3, quotient highest weight -4"),
        ("PrincipalOdd", 3, 0, "P_-(2), irreducible, weights all odd"),
        ("PrincipalOdd", 2, 0, "P_-(1), irreducible, weights all even"),
        ("DeltaInf", 3, 0, "D_-(4), irreducible, lowest weight 4"),
    ],
)
def test_classify_headlines(family, t, eta, headline):
    assert classify(Family.parse(family), t, Q(eta), 60)["headline"] == headline


def test_classify_cli_utf8(tmp_path):
    code, text = run(["classify", "--family", "PrincipalEven", "--t", "1"], tmp_path)
    assert code == 0
    assert "D_+⊕D_−" in text


# errors and exit codes ------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv,needle",
    [
        (["module", "--family", "VermaPoint", "--chart", "inf", "--t", "2"], "support"),
        (["module", "--family", "DualVerma", "--t", "0"], "regular dominant integral required"),
        (["module", "--family", "VermaPoint", "--t", "2", "--eta", "1"], "eta-twisted"),
        (["module", "--family", "Nope", "--t", "2"], "family"),
        (["module", "--family", "FiniteO", "--t", "2", "--window", "3"], "window"),
        (["derive"], "--t"),
        ([], "subcommand"),
    ],
)
def test_usage_errors_exit_two(argv, needle, capsys):
    assert main(argv) == 2
    assert needle in capsys.readouterr().err


def test_check_all_passes_for_one_twist(tmp_path):
    code, text = run(["check-all", "--t", "2", "--window", "20"], tmp_path)
    assert code == 0
    assert text.splitlines()[-1].startswith("all ") and text.splitlines()[-1].endswith(" checks passed")


def test_injected_fault_fails_with_label(tmp_path):
    code, text = run(["check-all", "--t", "2", "--window", "20", "--inject-fault"], tmp_path)
    assert code == 1
    last = text.splitlines()[-1]
    assert last.startswith("1 of ") and "table.VermaPoint/zero/E" in last


def test_unknown_fault_label_is_usage_error(capsys):
    assert main(["check-all", "--t", "2", "--inject-fault", "Nope/zero/E"]) == 2


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "sl2loc", "derive", "--t", "3"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert "casimir = 8" in proc.stdout


def test_check_all_default_range_and_small_window(tmp_path):
    code, text = run(["check-all"], tmp_path)
    assert code == 0
    lines = text.splitlines()
    assert all(line.startswith("PASS ") for line in lines[:-1])
    assert lines[-1] == f"all {len(lines) - 1} checks passed"
    large = {line.split()[1].rstrip(":"): True for line in lines[:-1]}
    # the same verdicts with the smallest allowed window
    _, small = run(["check-all", "--window", "8", "--format", "json"], tmp_path, "small.json")
    assert {r["label"]: r["ok"] for r in json.loads(small)["results"]} == large
