import io
import json

import pytest

from qduflo.cli.main import run, parse_window, UsageError, SCHEMA
from qduflo.cli.parse import parse_algebra, parse_qstructure, ParseError, load, corpus_files


def call(*argv):
    out = io.StringIO()
    code, report = run(list(argv), out=out)
    return code, report, out.getvalue()


def test_validate_algebra():
    code, rep, text = call("validate", "sl2.alg")
    assert code == 0 and rep["passed"] and rep["schema"] == SCHEMA
    assert "result: PASS" in text


def test_validate_q_file():
    code, rep, _ = call("validate", "derham2.q")
    assert code == 0 and rep["kind"] == "qstructure"


def test_failed_check_exit_code(tmp_path):
    f = tmp_path / "bad.alg"
    f.write_text("basis: a:0, b:0, c:0\n[a,b] = c\n[b,c] = a\n[c,a] = c\n")
    code, rep, _ = call("validate", str(f))
    assert code == 2 and not rep["passed"]


def test_missing_file_exit_code():
    code, rep, text = call("validate", "no_such_file.alg")
    assert code == 1 and rep["error_kind"] == "FileNotFoundError"
    assert "file not found" in text


def test_parse_error_exit_code(tmp_path):
    f = tmp_path / "bad.alg"
    f.write_text("basis: a:0, b:0\n[a,b] = a +* b\n")
    code, rep, _ = call("validate", str(f))
    assert code == 1 and rep["error_kind"] == "ParseError"
    assert ":2:" in rep["error"]


def test_usage_error_exit_code():
    code, rep, _ = call("duflo", "derham1.q")
    assert code == 1 and rep["error_kind"] == "UsageError"


def test_cap_exit_code(monkeypatch):
    monkeypatch.setenv("QDUFLO_DIM_CAP", "30")
    code, rep, _ = call("cohomology", "abelian2.alg", "--type", "hochschild", "--cap", "4")
    assert code == 3 and rep["error_kind"] == "DimensionCap" and rep["cap"] == 30


def test_duflo_command():
    code, rep, _ = call("duflo", "sl2.alg", "--max-degree", "4")
    assert code == 0 and rep["all_discrepancies_zero"]
    assert rep["naive_witness"]["naive_delta"] != "0"


@pytest.mark.parametrize("argv,key,value", [
    (["cohomology", "sl2.alg", "--type", "ce"], "dims", {"0": 1, "1": 0, "2": 0, "3": 1}),
    (["cohomology", "derham1.q", "--type", "functions"], "dims", {"0": 1, "1": 0}),
    (["cohomology", "solv2.alg", "--type", "tpoly", "--window", "0..1"], "dims",
     {"0": 1, "1": 1}),
])
def test_cohomology_commands(argv, key, value):
    code, rep, _ = call(*argv)
    assert code == 0 and rep[key] == value


def test_hochschild_command_reports_stabilization():
    code, rep, _ = call("cohomology", "solv2.alg", "--type", "hochschild", "--window", "0..1",
                        "--cap", "3")
    assert code == 0
    assert rep["degrees"]["0"]["stabilized"] and rep["degrees"]["1"]["dimension"] == 1


@pytest.mark.parametrize("file,which", [("sl2.alg", "3.3"), ("dgla2.alg", "corollary4"),
                                        ("heisenberg.alg", "5.2"), ("derham2.q", "5.2")])
def test_lemma_commands(file, which):
    code, rep, _ = call("lemma", file, "--which", which, "--samples", "10")
    assert code == 0, rep


def test_theorem7_command():
    code, rep, _ = call("theorem7", "abelian1.alg", "--window", "0..2", "--cap", "3")
    assert code == 0 and rep["passed"]


def test_theorem7_skip_is_a_failure():
    code, rep, _ = call("theorem7", "dgla2.alg", "--window", "0", "--cap", "2")
    assert code == 2 and rep["skipped"]


def test_json_is_deterministic(tmp_path):
    outs = []
    for i in range(2):
        p = tmp_path / f"r{i}.json"
        call("duflo", "osp12.alg", "--max-degree", "4", "--json", str(p), "-q")
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    data = json.loads(outs[0])
    assert list(data) == sorted(data)


def test_json_to_stdout():
    code, rep, text = call("validate", "solv2.alg", "--json", "-")
    assert json.loads(text) == rep


def test_window_parsing():
    assert parse_window("0..2") == [0, 1, 2]
    assert parse_window("3") == [3]
    for bad in ("2..0", "a..b"):
        with pytest.raises(UsageError):
            parse_window(bad)


# --- file readers

def test_parse_algebra_fills_antisymmetric_partner():
    spec = parse_algebra("name: t\nbasis: x:1, z:2\n[x,x] = z\n")
    assert spec.name == "t" and spec.dim == 2
    spec = parse_algebra("basis: a:0, b:0\n[a,b] = b   # comment\n")
    assert spec.bracket_basis(1, 0) == {1: -1}


@pytest.mark.parametrize("text,line,col", [
    ("basis: a:0, b\n", 1, 13),
    ("[a,b] = a\n", 1, 1),
    ("basis: a:0, b:0\n[a,c] = a\n", 2, 4),
    ("basis: a:0, b:0\n[a,b] = a*b\n", 2, 9),
    ("basis: a:0, b:0\nnonsense\n", 2, 1),
    ("basis: a:0, a:0\n", 1, 1),
])
def test_parse_algebra_errors(text, line, col):
    with pytest.raises(ParseError) as err:
        parse_algebra(text, "f.alg")
    assert (err.value.line, err.value.column) == (line, col)
    assert str(err.value).startswith(f"f.alg:{line}:{col}:")


def test_parse_qstructure():
    Q = parse_qstructure("coords: x:0, dx:1\ntruncate: 3\nQ[x] = dx\n")
    assert Q.max_poly_degree == 3 and str(Q) == "(dx)*d/dx"
    with pytest.raises(ParseError) as err:
        parse_qstructure("coords: x:0\nQ[y] = x\n")
    assert err.value.line == 2


def test_every_corpus_file_loads():
    files = corpus_files()
    assert {"sl2.alg", "osp12.alg", "derham1.q"} <= set(files)
    for f in files:
        load(f)
