import json

import pytest
from hypothesis import given, settings, strategies as st

from golden import split_dnn1_4
from resforge.cli import main
from resforge.d4m import build_hb_d4m, build_split_d4m
from resforge.dnn1 import build_hb_dnn1, build_split_dnn1
from resforge.poly import VariableRegistry
from resforge.serialize import (ParseError, export_latex, export_m2, export_singular, latex_poly,
                                parse_complex, parse_expression, parse_m2_matrices, parse_matrix_file,
                                poly_from_json, poly_to_json, same_complex, serialize_complex)


@pytest.mark.parametrize("build,p", [(build_split_dnn1, 4), (build_split_dnn1, 6), (build_hb_dnn1, 4),
                                     (build_split_d4m, 2), (build_split_d4m, 3), (build_hb_d4m, 2),
                                     (build_hb_d4m, 4)])
def test_json_round_trip(build, p):
    c = build(p, check=False)
    text = serialize_complex(c)
    back = parse_complex(text)
    assert same_complex(c, back)
    assert serialize_complex(back) == text


def test_header_fields():
    d = json.loads(serialize_complex(build_split_dnn1(4)))
    assert set(d["header"]) == {"format", "variant", "parameters", "sign-conventions", "tool-version"}
    assert d["header"]["parameters"] == {"n": 4}
    assert d["variables"][0] == "b_1_2"


def test_term_encoding_frozen():
    reg = VariableRegistry()
    x, y = reg.free("x", "y")
    p = x ** 2 * y / 3 - 5
    assert poly_to_json(p) == [[1, 3, [[0, 2], [1, 1]]], [-5, 1, []]]
    assert poly_from_json(reg, poly_to_json(p)) == p


def test_parse_expression():
    reg = VariableRegistry()
    x, y = reg.free("x", "y")
    assert parse_expression(reg, "x^2 - 3*x*y + (1/2)*y") == x ** 2 - 3 * x * y + y / 2
    for bad in ("x +", "z", "x/y", "x**y", "x.real"):
        with pytest.raises(ParseError):
            parse_expression(reg, bad)


def test_m2_export_reparses():
    c = build_split_dnn1(4)
    mats = parse_m2_matrices(export_m2(c))
    for k, d in enumerate(c.differentials, 1):
        assert [[str(x) for x in r] for r in mats[f"d{k}"].grid] == [[str(x) for x in r] for r in d.grid]
    assert "expected ranks of d1, d2, d3: (1, 3, 1)" in export_m2(c)


def test_singular_and_latex_exports():
    c = build_split_d4m(2)
    s = export_singular(c)
    assert s.startswith("// d4m(2) split") and "matrix d2[4][5]" in s
    tex = export_latex(c)
    assert tex.count("\\begin{pmatrix}") == 3 == tex.count("\\end{pmatrix}")
    assert tex.count("{") == tex.count("}")
    reg = VariableRegistry()
    reg.declare_b(3, 2)
    assert latex_poly(reg.b(1, 2, 1) * reg.b(1, 3, 2) / 2 - 1) == "\\frac{1}{2} b_{1,2,1} b_{1,3,2} - 1"


# ---------------------------------------------------------------- command line

def run(args, capsys):
    code = main(args)
    return code, capsys.readouterr()


def test_build_writes_displayed_matrices(tmp_path, capsys):
    out = tmp_path / "s4.json"
    code, _ = run(["build", "--format", "dnn1", "--variant", "split", "--n", "4", "-o", str(out)], capsys)
    assert code == 0
    c = parse_complex(out.read_text())
    assert (c.d1, c.d2, c.d3) == split_dnn1_4(c.reg)


def test_build_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        run(["build", "--format", "d4m", "--variant", "hb", "--m", "2", "-o", str(p)], capsys)
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("args", [["build", "--format", "dnn1", "--n", "5"],
                                  ["build", "--format", "dnn1", "--m", "4"],
                                  ["build", "--format", "d4m", "--m", "1"],
                                  ["build", "--format", "d4m", "--variant", "split", "--m", "2",
                                   "--convention", "printed"]])
def test_build_bad_arguments(args, capsys):
    assert run(args, capsys)[0] == 2


def test_build_hb_m4(tmp_path, capsys):
    assert run(["build", "--format", "d4m", "--variant", "hb", "--m", "4", "-o", str(tmp_path / "h.json")],
               capsys)[0] == 0


def test_verify_pipeline(tmp_path, capsys):
    f = tmp_path / "s4.json"
    f.write_text(serialize_complex(build_split_dnn1(4)))
    code, out = run(["verify", str(f), "--checks", "compose,rank,grade"], capsys)
    assert code == 0
    assert json.loads(out.out)["verdict"] == "acyclic-certified"
    code, out = run(["verify", str(f), "--checks", "compose"], capsys)
    rep = json.loads(out.out)
    assert code == 0 and {r["tag"] for r in rep["ranks"]} == {"skipped"}


def test_verify_tampered_file(tmp_path, capsys):
    d = json.loads(serialize_complex(build_split_dnn1(4)))
    d["differentials"]["d2"][3][3] = [[2, 1, []]]
    f = tmp_path / "t.json"
    f.write_text(json.dumps(d))
    assert run(["verify", str(f)], capsys)[0] == 1


def test_verify_parse_errors(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text("{not json")
    assert run(["verify", str(f)], capsys)[0] == 4
    assert run(["verify", str(tmp_path / "missing.json")], capsys)[0] == 4
    f.write_text(json.dumps({"header": {"format": "dnn1"}}))
    assert run(["verify", str(f)], capsys)[0] == 4


def test_verify_unknown_check(tmp_path, capsys):
    f = tmp_path / "s.json"
    f.write_text(serialize_complex(build_split_dnn1(4)))
    assert run(["verify", str(f), "--checks", "depth"], capsys)[0] == 2


def test_specialize_71_example(tmp_path, capsys):
    m = tmp_path / "M.json"
    m.write_text(json.dumps({"variables": ["x", "y", "v", "w", "a", "b", "c", "Z"],
                             "matrix": [["x", "0", "0"], ["0", "y", "0"], ["v", "0", "w"], ["a", "b", "c"]]}))
    out = tmp_path / "sp.json"
    code, _ = run(["specialize", "--thm", "71", str(m), "--k", "1", "--r", "2", "-o", str(out)], capsys)
    assert code == 0
    d = json.loads(out.read_text())
    reg = VariableRegistry()
    reg.free("x", "y", "v", "w", "a", "b", "c", "Z")
    got = {parse_expression(reg, s) for s in d["ideal"]}
    want = [parse_expression(reg, s) for s in ("Z*x*y*w", "Z*x*y*c", "y*(c*v - w*a)", "x*b*w")]
    assert all(w in got or -w in got for w in want)
    assert d["minimality"] is True


def test_specialize_72_generic(tmp_path, capsys):
    names = [f"x{i}{j}" for i in range(1, 5) for j in range(1, 4)]
    m = tmp_path / "M.json"
    m.write_text(json.dumps({"variables": names,
                             "matrix": [[f"x{i}{j}" for j in range(1, 4)] for i in range(1, 5)]}))
    code, out = run(["specialize", "--thm", "72", str(m)], capsys)
    assert code == 0
    d = json.loads(out.out)
    assert len(d["ideal"]) == 4 and d["compose"] == [True, True]


def test_specialize_errors(tmp_path, capsys):
    m = tmp_path / "M.json"
    m.write_text('{"variables": ["x"], "matrix": [["x +"]]}')
    assert run(["specialize", "--thm", "72", str(m)], capsys)[0] == 4
    m.write_text(json.dumps({"variables": ["x"], "matrix": [["x", "0", "0"]] * 4}))
    assert run(["specialize", "--thm", "71", str(m), "--k", "2", "--r", "2"], capsys)[0] == 2
    assert run(["specialize", "--thm", "71", str(m)], capsys)[0] == 2


def test_export_targets(tmp_path, capsys):
    f = tmp_path / "s.json"
    f.write_text(serialize_complex(build_split_dnn1(4)))
    code, out = run(["export", str(f), "m2"], capsys)
    assert code == 0 and out.out.startswith("-- dnn1(4) split")
    with pytest.raises(SystemExit) as exc:
        main(["export", str(f), "maple"])
    assert exc.value.code == 2


def test_budget_env_is_honored(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("RESFORGE_BUDGET_MS", "0")
    f = tmp_path / "s.json"
    f.write_text(serialize_complex(build_split_dnn1(4)))
    code, out = run(["verify", str(f)], capsys)
    rep = json.loads(out.out)
    assert code == 0 and rep["verdict"] == "indeterminate"


# ---------------------------------------------------------------- properties

@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-50, 50), st.integers(1, 6), st.integers(0, 3), st.integers(0, 3)),
                max_size=6))
def test_polynomial_json_round_trip(terms):
    reg = VariableRegistry()
    x, y = reg.free("x", "y")
    p = reg.zero()
    for n, d, a, b in terms:
        p = p + x ** a * y ** b * n / d
    assert poly_from_json(reg, json.loads(json.dumps(poly_to_json(p)))) == p
    assert parse_expression(reg, str(p)) == p


def test_matrix_file_round_trip():
    from resforge.serialize import matrix_file_text
    reg = VariableRegistry()
    x, y = reg.free("x", "y")
    from resforge.matrix import PolyMatrix
    M = PolyMatrix(reg, [[x, y / 2], [x * y - 1, 0]])
    back = parse_matrix_file(matrix_file_text(M))
    assert [[str(a) for a in r] for r in back.grid] == [[str(a) for a in r] for r in M.grid]
