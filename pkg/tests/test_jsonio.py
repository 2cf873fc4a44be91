import pytest
from hypothesis import given, strategies as st

from urforcing.formula import AEq, And, Const, Exists, In, IsUr, Not, Var
from urforcing.hfu import EMPTY, hset, make_set, ur
from urforcing.jsonio import (
    ParseError,
    formula_from_json,
    formula_to_json,
    lname_from_json,
    lname_to_json,
    pname_from_json,
    pname_to_json,
    session_from_json,
    ultrapower_from_json,
    value_from_json,
    value_to_json,
)
from urforcing.names import lname, pname

a, b = ur("a"), ur("b")

values = st.recursive(
    st.sampled_from([a, b, EMPTY]),
    lambda inner: st.frozensets(inner, max_size=3).map(make_set),
    max_leaves=8,
)


@given(values)
def test_value_round_trip(v):
    assert value_from_json(value_to_json(v)) == v


def test_value_encoding_is_canonical():
    assert value_to_json(make_set([hset(a), EMPTY])) == value_to_json(make_set([EMPTY, hset(a)]))
    assert value_to_json(a) == {"ur": "a"}


def test_name_round_trips():
    x = pname((a, "p"), (pname((b, "1")), "q"))
    assert pname_from_json(pname_to_json(x)) == x
    t = lname((a, "p"), (lname((b, "1")), "q"))
    assert lname_from_json(lname_to_json(t)) == t
    assert lname_from_json({"ur": "a"}) == a


def test_formula_round_trip():
    x = pname((a, "p"))
    phi = Exists("y", And(Not(In(Var("y"), Const(x))), AEq(Const(x), Var("y"))))
    assert formula_from_json(formula_to_json(phi)) == phi
    assert formula_from_json({"A": {"var": "z"}}) == IsUr(Var("z"))


@pytest.mark.parametrize("bad", [
    {"atom": {"kind": "member", "lhs": {"var": "x"}, "rhs": {"var": "y"}}},
    {"or": []},
    {"and": [{"A": {"var": "x"}}]},
    [],
])
def test_formula_parse_errors(bad):
    with pytest.raises(ParseError):
        formula_from_json(bad)


def test_session_labels():
    s = session_from_json({
        "pool": ["a", "b"],
        "poset": {"elements": ["1", "p", "q"], "leq": [["p", "1"], ["q", "1"]]},
        "names": {"xa": {"pname": [[{"ur": "a"}, "1"]]}, "y": {"pname": [["xa", "p"]]}},
        "config": {"depth": 1},
    })
    assert s.names["y"] == pname((pname((a, "1")), "p"))
    assert len(s.name_pool()) == 2
    with pytest.raises(ParseError):
        session_from_json({"names": {"u": {"pname": [["u", "1"]]}}})
    with pytest.raises(ParseError):
        session_from_json({"pool": ["a"], "names": {"u": {"pname": [[{"ur": "b"}, "1"]]}}})
    with pytest.raises(ParseError):
        session_from_json({"config": {"budget": 0}})


def test_ultrapower_input():
    fs, F = ultrapower_from_json({"index": ["i", "j"], "generator": "j",
                                  "functions": {"f": {"i": {"ur": "a"}, "j": {"set": []}}}})
    assert F.generator == "j" and fs["f"]["j"] == EMPTY
    with pytest.raises(ParseError):
        ultrapower_from_json({"index": ["i", "j"], "generator": "j", "functions": {"f": {"i": {"ur": "a"}}}})
