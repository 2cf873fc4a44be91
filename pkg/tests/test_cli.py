import json

import pytest
from click.testing import CliRunner

from urforcing.cli import cli

SESSION = {
    "pool": ["a", "b"],
    "poset": {"elements": ["1", "p", "q"], "leq": [["p", "1"], ["q", "1"]], "top": "1"},
    "names": {
        "a": {"pname": [[{"ur": "a"}, "1"]]},
        "b": {"pname": [[{"ur": "b"}, "1"]]},
        "x": {"pname": [[{"ur": "a"}, "p"], [{"ur": "b"}, "q"]]},
        "xp": {"pname": [["a", "p"], ["b", "q"]]},
    },
    "config": {"depth": 1},
}
EXISTS_IN_XP = {"exists": {"var": "y", "body": {"atom": {"kind": "in", "lhs": {"var": "y"}, "rhs": {"const": "xp"}}}}}


@pytest.fixture
def run(tmp_path):
    path = tmp_path / "session.json"
    path.write_text(json.dumps(SESSION))
    runner = CliRunner()

    def invoke(*args, session=True):
        pre = ["--session", str(path)] if session else []
        return runner.invoke(cli, pre + list(args), catch_exceptions=False)

    return invoke


def test_value(run):
    r = run("value", "a", "1,q")
    assert r.exit_code == 0 and json.loads(r.output) == {"ur": "a"}
    assert json.loads(run("value", "x", '["1","q"]').output) == {"ur": "b"}


def test_forces_star_and_semantic_agree(run):
    phi = json.dumps(EXISTS_IN_XP)
    for p in ("1", "p", "q"):
        star = run("forces", p, phi, "--star").output
        sem = run("forces", p, phi, "--semantic").output
        assert star == sem == "true\n"
    r = run("forces", "1", json.dumps({"A": {"const": "xp"}}))
    assert r.output == "false\n"


def test_generics(run):
    assert json.loads(run("generics").output) == [["1", "p"], ["1", "q"]]


def test_name_commands(run):
    assert json.loads(run("mix", '{"p":"a","q":"b"}').output) == SESSION["names"]["x"]
    assert json.loads(run("purify", "x", "a").output) == {"pname": [[{"ur": "a"}, "p"]]}
    assert json.loads(run("setpart", "x").output) == {"pname": []}
    assert json.loads(run("j", '{"ur":"a"}').output) == SESSION["names"]["a"]


def test_error_codes(run):
    r = run("mix", '{"1":"a","p":"b"}')
    assert r.exit_code == 1
    assert json.loads(r.output)["error"]["code"] == "NOT_ANTICHAIN"
    r = run("value", "nosuch", "1")
    assert r.exit_code == 2
    r = run("forces", "zz", json.dumps(EXISTS_IN_XP))
    assert json.loads(r.output)["error"]["code"] == "UNKNOWN_CONDITION"


def test_validate(tmp_path, run):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"pname": [[{"ur": "a"}, "1"]]}))
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"pname": [[{"ur": "a"}, "1"], [{"ur": "b"}, "1"]]}))
    broken = tmp_path / "broken.json"
    broken.write_text("{nope")
    assert run("validate", str(good), session=False).exit_code == 0
    r = run("validate", str(bad), session=False)
    assert r.exit_code == 1
    out = json.loads(r.output)
    assert out["violation"]["reason"] == "compatible-entries"
    assert run("validate", str(broken), session=False).exit_code == 2
    poset = tmp_path / "poset.json"
    poset.write_text(json.dumps({"elements": ["1", "p", "q"], "leq": [["p", "q"], ["q", "p"]], "top": "1"}))
    r = run("validate", str(poset), session=False)
    assert r.exit_code == 1 and json.loads(r.output)["violation"]["law"] == "antisymmetry"
    ideal = tmp_path / "ideal.json"
    ideal.write_text(json.dumps({"pool": ["a", "b"], "family": [[], ["a"], ["b"]]}))
    assert run("validate", str(ideal), session=False).exit_code == 1


def test_check_legacy_fullness(run):
    r = run("check", "remark33")
    assert r.exit_code == 0
    assert json.loads(r.output)["passed"] is True


def test_check_output_is_deterministic(run):
    assert run("check", "ideals").output == run("check", "ideals").output


def test_pretty(run):
    assert run("--pretty", "generics").output.count("\n") > 1


def test_diagram():
    runner = CliRunner()
    data = json.loads(runner.invoke(cli, ["diagram"]).output)
    assert len(data["edges"]) == 14
    assert runner.invoke(cli, ["diagram", "--format", "dot"]).output.startswith("digraph")


def test_bad_session(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"poset": {"elements": ["p"], "top": "1"}}))
    r = CliRunner().invoke(cli, ["--session", str(path), "generics"])
    assert r.exit_code == 1 and json.loads(r.output)["error"]["code"] == "INVALID_POSET"
