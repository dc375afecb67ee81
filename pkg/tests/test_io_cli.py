import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import corrupt
from conftest import load, pipeline
from dgbv_frobenius import cli, fixtures
from dgbv_frobenius.algebra import AlgebraData
from dgbv_frobenius.bv import DgbvData
from dgbv_frobenius.io import (InputError, parse_dgbv, parse_frobenius, parse_rational, serialize_dgbv,
                               serialize_frobenius)


def same(d1, d2):
    return (d1.alg.basis_names == d2.alg.basis_names and d1.alg.degrees == d2.alg.degrees
            and d1.alg.table == d2.alg.table and d1.alg.unit_index == d2.alg.unit_index
            and d1.alg.bidegrees == d2.alg.bidegrees and d1.dbar_map == d2.dbar_map
            and d1.delta_map == d2.delta_map and d1.trace == d2.trace and d1.top_degree == d2.top_degree)


@pytest.mark.parametrize("name", ["unit", "trivial:1", "trivial:2", "square", "tensor"])
def test_roundtrip_fixtures(name):
    d = load(name)
    text = serialize_dgbv(d)
    back = parse_dgbv(text)
    assert same(d, back)
    assert serialize_dgbv(back) == text


q = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def dgbv_data(draw):
    n = draw(st.integers(1, 5))
    degs = draw(st.lists(st.integers(-2, 6), min_size=n, max_size=n))
    idx = st.integers(0, n - 1)
    prod = draw(st.lists(st.tuples(idx, idx, idx, q), max_size=8))
    ops = [draw(st.lists(st.tuples(idx, idx, q), max_size=4)) for _ in range(2)]
    integral = draw(st.lists(st.tuples(idx, q), max_size=2))
    pq = draw(st.booleans())
    bideg = [(draw(st.integers(0, 3)), draw(st.integers(0, 3))) for _ in range(n)] if pq else ()
    alg = AlgebraData([f"e{i}" for i in range(n)], degs, prod, draw(idx), bideg)
    return DgbvData(alg, ops[0], ops[1], integral, draw(st.integers(0, 8)))


@settings(max_examples=60, deadline=None)
@given(dgbv_data())
def test_roundtrip_random(d):
    assert same(parse_dgbv(serialize_dgbv(d)), d)


def test_frobenius_roundtrip():
    _, res = pipeline("tensor")
    F = res.frobenius
    back = parse_frobenius(serialize_frobenius(F))
    assert back.A == F.A and back.g == F.g and back.Phi == F.Phi and back.vars == F.vars
    assert back.euler_weights == F.euler_weights and back.bidegrees == F.bidegrees


def test_rational_grammar():
    assert parse_rational("-3/4", "x") == Fraction(-3, 4)
    assert parse_rational("+7", "x") == 7
    for bad in ("1/0", "0.5", "1e3", "", "1/", 3):
        with pytest.raises(InputError):
            parse_rational(bad, "x")


def test_parse_diagnostics():
    text = serialize_dgbv(fixtures.square())
    with pytest.raises(InputError, match="line"):
        parse_dgbv(text[:200])
    doc = json.loads(text)
    doc["product"][0][2] = "zz"
    with pytest.raises(InputError, match=r"product\[0\].*zz"):
        parse_dgbv(json.dumps(doc))
    doc = json.loads(text)
    doc["field"] = "R"
    with pytest.raises(InputError, match="field"):
        parse_dgbv(json.dumps(doc))
    doc = json.loads(text)
    del doc["top_degree"]
    with pytest.raises(InputError, match="top_degree"):
        parse_dgbv(json.dumps(doc))
    doc = json.loads(text)
    doc["dbar"][0][2] = 1.5
    with pytest.raises(InputError, match=r"dbar\[0\]"):
        parse_dgbv(json.dumps(doc))


def test_fixture_files():
    unit = json.loads(serialize_dgbv(cli.cmd_fixture("unit")))
    assert len(unit["basis"]) == 1 and unit["top_degree"] == 0 and unit["integral"] == [["1", "1"]]
    t2 = json.loads(serialize_dgbv(cli.cmd_fixture("trivial")))
    assert len(t2["basis"]) == 16 and t2["top_degree"] == 4
    assert serialize_dgbv(cli.cmd_fixture("square")) == serialize_dgbv(cli.cmd_fixture("square"))
    with pytest.raises(InputError, match="available"):
        cli.cmd_fixture("nope")


def _write(tmp_path, name, d):
    p = tmp_path / name
    p.write_text(serialize_dgbv(d))
    return str(p)


def test_exit_codes(tmp_path, capsys):
    good = _write(tmp_path, "sq.json", fixtures.square())
    bad = _write(tmp_path, "bad.json", corrupt.square_no_anticommute())
    assert cli.main(["validate", good, "--format", "summary"]) == 0
    assert cli.main(["validate", bad]) == 1
    out = capsys.readouterr().out
    assert '"anticommutation"' in out
    trunc = tmp_path / "t.json"
    trunc.write_text(serialize_dgbv(fixtures.square())[:100])
    assert cli.main(["validate", str(trunc)]) == 2
    assert "line" in capsys.readouterr().err
    assert cli.main(["run", str(tmp_path / "missing.json")]) == 2
    assert cli.main(["run", "--fixture", "square", "--order", "0"]) == 2


def test_internal_error_code(monkeypatch, capsys):
    def boom(*a, **k):
        raise cli.StageError("solve_mc", RuntimeError("synthetic"))
    monkeypatch.setattr(cli, "run_pipeline", boom)
    assert cli.main(["run", "--fixture", "unit"]) == 3
    assert "solve_mc" in capsys.readouterr().err


def test_run_is_byte_deterministic_and_checkable(tmp_path):
    f = _write(tmp_path, "sq.json", fixtures.square())
    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert cli.main(["run", f, "--order", "4", "--output", str(r1)]) == 0
    assert cli.main(["run", "--fixture", "square", "--order", "4", "--output", str(r2)]) == 0
    assert r1.read_bytes() == r2.read_bytes()
    doc = json.loads(r1.read_text())
    assert doc["summary"] == {"passed": True, "failed": []}
    assert doc["euler"]["spectrum"] == ["-2", "-1", "0", "1"]
    assert cli.main(["check", str(r1), "--order", "4", "--output", str(tmp_path / "c.json")]) == 0
    series = tmp_path / "F.json"
    series.write_text(json.dumps(doc["frobenius"]))
    assert cli.main(["check", str(series), "--format", "summary", "--output", str(tmp_path / "c2.json")]) == 0


def test_run_on_invalid_input_fails_cleanly(tmp_path):
    bad = _write(tmp_path, "bad.json", corrupt.square_without_delta())
    out = tmp_path / "r.json"
    assert cli.main(["run", bad, "--output", str(out)]) == 1
    doc = json.loads(out.read_text())
    assert doc["summary"]["failed"] == ["ddbar_lemma"]


def test_tensor_command(tmp_path):
    out = tmp_path / "t.json"
    assert cli.main(["tensor", "--fixture", "square", "--fixture", "trivial:1", "--output", str(out)]) == 0
    assert cli.main(["validate", str(out), "--format", "summary", "--output", str(tmp_path / "v.json")]) == 0
    assert len(json.loads(out.read_text())["basis"]) == 32
    bad = _write(tmp_path, "bad.json", corrupt.square_zero_integral())
    assert cli.main(["tensor", bad, "--fixture", "unit"]) == 2
