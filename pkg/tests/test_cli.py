# tests/test_cli.py
import json
import re
from pathlib import Path

import pytest

from cli import parsing
from cli.commands import run
from services import matroid as mat
from services.errors import InputError, NotPrime, SchemaError

K4_JSON = {"kind": "graphic", "vertices": 4, "edges": [list(e) for e in parsing.K4_EDGES]}


# ------------------------- parsing -------------------------
def test_builtin_names():
    assert parsing.parse_matroid("U:2,4") == mat.uniform(2, 4)
    assert parsing.parse_matroid("Mn:5") == mat.uniform(1, 5)
    assert parsing.parse_matroid("Mn*:4") == mat.uniform(3, 4)
    k4 = parsing.parse_matroid("K4")
    assert len(k4.bases) == 16 and k4.name == "K4"


def test_json_kinds(tmp_path):
    assert len(parsing.matroid_from_dict(K4_JSON).bases) == 16
    dual = {"kind": "dual", "of": {"kind": "uniform", "r": 1, "n": 3}}
    assert parsing.matroid_from_dict(dual) == mat.uniform(2, 3)
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"kind": "bases", "n": 3, "bases": [[0], [1]], "name": "P"}), encoding="utf-8")
    m = parsing.parse_matroid(str(path))
    assert m.name == "P" and mat.loops(m) == 0b100
    assert parsing.parse_matroid('{"kind": "uniform", "r": 2, "n": 5}') == mat.uniform(2, 5)


@pytest.mark.parametrize("obj,location", [
    ({"kind": "circle"}, "$.kind"),
    ({"kind": "uniform", "r": 1}, "$"),
    ({"kind": "graphic", "vertices": 3, "edges": [[0, 1], [1]]}, "$.edges[1]"),
    ({"kind": "bases", "n": 2, "bases": [[0], [5]]}, "$.bases[1][0]"),
    ({"kind": "dual", "of": {"kind": "uniform", "r": "1", "n": 3}}, "$.of.r"),
])
def test_schema_errors_carry_location(obj, location):
    with pytest.raises(SchemaError) as info:
        parsing.matroid_from_dict(obj)
    assert info.value.location == location


def test_basis_axiom_failures_surface_verbatim():
    from services.errors import ExchangeViolation
    with pytest.raises(ExchangeViolation):
        parsing.matroid_from_dict({"kind": "bases", "n": 4, "bases": [[0, 1], [2, 3]]})


def test_malformed_json_reports_line_and_column():
    with pytest.raises(SchemaError) as info:
        parsing.parse_matroid('{"kind": "uniform",\n "r": }')
    assert info.value.location.startswith("<inline>:2:")


def test_scalar_parsers(u24):
    assert parsing.parse_weights("1, -2,3,4", 4) == [1, -2, 3, 4]
    assert parsing.parse_weights(None, 4) is None
    with pytest.raises(InputError):
        parsing.parse_weights("1,2", 4)
    with pytest.raises(SchemaError):
        parsing.parse_weights("1,x,3,4", 4)
    assert parsing.parse_primes(["5", "2", "5"]) == [2, 5]
    with pytest.raises(NotPrime):
        parsing.parse_prime("9")
    assert parsing.parse_flat("", u24) == 0
    assert parsing.parse_flat("0,2", u24) == 0b101
    with pytest.raises(InputError):
        parsing.parse_flat("7", u24)


# ------------------------- commands -------------------------
def test_characters_k4_at_three(capsys):
    assert run(["characters", "--matroid", "K4", "--prime", "3"]) == 0
    out = capsys.readouterr().out
    assert "simple characters (p=3):" in out
    assert "ch L({}) = 1·e{} + 3·e{0,1,2,3,4,5}" in out
    assert "ch Δ({}) = 1·e{} + 1·e{0,1,3} + 1·e{0,2,4} + 1·e{1,2,5} + 1·e{3,4,5} + 6·e{0,1,2,3,4,5}" in out


def test_semisimple_bad_primes(capsys):
    assert run(["semisimple", "--matroid", "U:1,6"]) == 0
    assert "bad primes: 2, 3" in capsys.readouterr().out


def test_decomp_json(tmp_path, capsys):
    target = tmp_path / "decomp.json"
    assert run(["decomp", "--matroid", "K4", "--prime", "2", "--prime", "3", "--json", str(target)]) == 0
    data = json.loads(target.read_text(encoding="utf-8"))
    at_two = [e for e in data["decomposition"] if e["p"] == 2]
    assert at_two == [{"col": "{0,1,2,3,4,5}", "p": 2, "row": "{}", "value": 2}]
    assert {e["value"] for e in data["decomposition"] if e["p"] == 3} == {1, 3}
    assert "p=2 [Δ({0,1,2,3,4,5}):L({})] = 2" in capsys.readouterr().out


def test_describe_json(tmp_path):
    target = tmp_path / "k4.json"
    assert run(["describe", "--matroid", json.dumps(K4_JSON), "--json", str(target)]) == 0
    data = json.loads(target.read_text(encoding="utf-8"))
    assert data["extra"]["bases"] == 16
    assert data["extra"]["beta"] == 2
    assert data["flats"][0] == [] and data["flats"][-1] == [0, 1, 2, 3, 4, 5]
    assert len(data["flats"]) == 6


def test_det_and_axioms_pass(capsys):
    assert run(["det", "--matroid", "U:2,4"]) == 0
    assert "gram=" in capsys.readouterr().out
    assert run(["axioms", "--matroid", "U:2,3"]) == 0


def test_jantzen_for_one_flat(tmp_path):
    target = tmp_path / "j.json"
    assert run(["jantzen", "--matroid", "K4", "--prime", "3", "--flat", "", "--json", str(target)]) == 0
    data = json.loads(target.read_text(encoding="utf-8"))
    sums = data["extra"]["jantzen"]["3"]["{}"]
    assert sums["rhs"]["{0,1,2,3,4,5}"] == 10
    assert sums["gap"]["{0,1,2,3,4,5}"] == 3
    assert sums["filtration"]["{0,1,2,3,4,5}"] == 6


def test_dims_and_cap(tmp_path, capsys):
    target = tmp_path / "d.json"
    assert run(["dims", "--matroid", "U:1,2", "--json", str(target)]) == 0
    data = json.loads(target.read_text(encoding="utf-8"))
    assert data["extra"]["dim_R"] == 5
    assert data["axioms"]["centralizer_of_Rc"]["passed"]
    assert run(["dims", "--matroid", "U:1,3", "--cap", "2"]) == 0
    assert "operator_model: skipped" in capsys.readouterr().out


def test_identities_pass():
    assert run(["identities", "--matroid", "U:2,4"]) == 0


@pytest.mark.slow
def test_identities_k4():
    assert run(["identities", "--matroid", "K4"]) == 0


@pytest.mark.parametrize("argv,message", [
    (["characters", "--matroid", "K4", "--prime", "4"], "not a prime"),
    (["describe", "--matroid", "U:2,4", "--weights", "1,2"], "Expected 4 weights"),
    (["describe"], "needs --matroid"),
    (["decomp", "--matroid", "U:1,3"], "needs at least one --prime"),
    (["characters", "--matroid", "U:1,3", "--weights", "1,3,1", "--prime", "3"], "divisible by p = 3"),
    (["describe", "--matroid", '{"kind": '], "<inline>:1:"),
    (["describe", "--matroid", "no/such/file.json"], "neither a built-in"),
    (["jantzen", "--matroid", "U:1,3", "--prime", "2", "--flat", "0"], "not a cyclic flat"),
    (["semisimple", "--matroid", "U:1,2", "--weights", "1,-1"], "sum to zero"),
])
def test_input_errors_exit_two(capsys, argv, message):
    assert run(argv) == 2
    assert message in capsys.readouterr().err


def test_unknown_subcommand_exits_two(capsys):
    assert run(["bogus"]) == 2


@pytest.mark.slow
def test_selftest_passes(capsys):
    assert run(["selftest"]) == 0
    assert "FAIL" not in capsys.readouterr().out


# ------------------------- text and JSON agree -------------------------
GOLDEN = Path(__file__).parent / "golden"
_CHAR_LINE = re.compile(r"^  ch (Δ|L)\((.*?)\) = (.*)$")
_DECOMP_LINE = re.compile(r"^  p=(\d+) \[Δ\((.*?)\):L\((.*?)\)\] = (-?\d+)$")
_DET_LINE = re.compile(r"^det (.*?): gram=(\S+) predicted=(\S+)$")


def _parse_character(text):
    if text == "0":
        return {}
    out = {}
    for term in text.split(" + "):
        coeff, label = term.split("·e", 1)
        out[label] = int(coeff)
    return out


def _tables_from_text(out):
    standard, simple, decomposition, dets = {}, {}, [], []
    prime = None
    for line in out.splitlines():
        if line.startswith("simple characters (p="):
            prime = line[len("simple characters (p="):-2]
            simple[prime] = {}
        hit = _CHAR_LINE.match(line)
        if hit:
            kind, flat, char = hit.groups()
            target = standard if kind == "Δ" else simple[prime]
            target[flat] = _parse_character(char)
        hit = _DECOMP_LINE.match(line)
        if hit:
            p, col, row, value = hit.groups()
            decomposition.append({"p": int(p), "row": row, "col": col, "value": int(value)})
        hit = _DET_LINE.match(line)
        if hit:
            dets.append(hit.groups())
    return standard, simple, decomposition, dets


def _by_cell(entries):
    return sorted(entries, key=lambda e: (e["p"], e["row"], e["col"]))


def test_decomp_matches_golden_and_text(tmp_path, capsys):
    target = tmp_path / "k4.json"
    assert run(["decomp", "--matroid", "K4", "--prime", "3", "--json", str(target)]) == 0
    data = json.loads(target.read_text(encoding="utf-8"))
    golden = json.loads((GOLDEN / "k4_decomp_p3.json").read_text(encoding="utf-8"))
    for key in ("field", "matroid", "p", "simple_characters", "weights"):
        assert data[key] == golden[key], key
    assert _by_cell(data["decomposition"]) == _by_cell(golden["decomposition"])

    _, simple, decomposition, _ = _tables_from_text(capsys.readouterr().out)
    assert simple == data["simple_characters"]
    assert _by_cell(decomposition) == _by_cell(data["decomposition"])


@pytest.mark.parametrize("argv", [
    ["characters", "--matroid", "K4", "--prime", "2", "--prime", "5"],
    ["characters", "--matroid", "U:2,4", "--weights", "1,2,2,3", "--prime", "7"],
    ["det", "--matroid", "U:2,4", "--weights", "1,2,2,2"],
    ["det", "--matroid", "Mn*:5"],
])
def test_text_and_json_carry_the_same_numbers(tmp_path, capsys, argv):
    target = tmp_path / "report.json"
    assert run([*argv, "--json", str(target)]) == 0
    data = json.loads(target.read_text(encoding="utf-8"))
    standard, simple, decomposition, dets = _tables_from_text(capsys.readouterr().out)
    assert standard == data["standard_characters"]
    assert simple == data["simple_characters"]
    assert _by_cell(decomposition) == _by_cell(data["decomposition"])
    assert dets == [(d["minor"], d["gram_det"], d["predicted"]) for d in data["determinants"]]


def test_json_path_sets_output_format(tmp_path):
    job = parsing.JobSpec(command="describe", matroid=mat.uniform(1, 2))
    assert job.output_format == "text"
    job.json_path = tmp_path / "out.json"
    assert job.output_format == "json"
