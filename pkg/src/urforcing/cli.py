"""Command-line front end.

Arguments that take an object accept inline JSON, ``@path`` to a JSON file,
or (for names) a label defined in the ``--session`` file.  Output is one line
of canonical JSON unless ``--pretty`` is given.  Failures print
``{"error": {"code": ..., "message": ...}}``.
"""
from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from . import jsonio
from .axioms import diagram_json, is_a_ideal, to_dot
from .errors import UrforcingError
from .forcing import ForcingEngine, Report
from .formula import constants
from .jsonio import ParseError, Session
from .names import (
    close_pool,
    embed_j,
    mix,
    purify,
    set_counterpart,
    validate_name,
    valuate,
)
from .poset import Poset, PosetError, validate_poset
from .suites import SUITES, run_suite


class Ctx:
    def __init__(self, session: Session | None, pretty: bool, depth: int, budget: int):
        self.session = session
        self.pretty = pretty
        self.depth = depth
        self.budget = budget

    @property
    def poset(self) -> Poset:
        return self.session.poset if self.session else Poset(["1"], [], "1")

    def resolve(self, label: str):
        if self.session is None:
            raise ParseError(f"unknown name label {label!r} (no session loaded)")
        return self.session.resolve(label)

    def emit(self, obj) -> None:
        click.echo(jsonio.dumps(obj, self.pretty))


def _error(ctx_obj, exc: UrforcingError) -> None:
    pretty = getattr(ctx_obj, "pretty", False)
    click.echo(jsonio.dumps({"error": {"code": exc.code, "message": str(exc)}}, pretty))


def handled(fn):
    """Report core errors as JSON; parse errors exit 2, the rest exit 1."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return fn(*args, **kwargs)
        except ParseError as exc:
            _error(ctx.obj, exc)
            ctx.exit(2)
        except UrforcingError as exc:
            _error(ctx.obj, exc)
            ctx.exit(1)

    return wrapper


def _read(text: str):
    if text.startswith("@"):
        try:
            text = Path(text[1:]).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(str(exc)) from None
    return jsonio.load_json(text)


def _name_arg(obj: Ctx, text: str):
    if not text.startswith("@") and not text.lstrip().startswith(("{", "[", '"')):
        return obj.resolve(text)
    return jsonio.pname_from_json(_read(text), obj.resolve)


def _filter_arg(text: str) -> frozenset:
    if text.lstrip().startswith("[") or text.startswith("@"):
        data = _read(text)
        if not isinstance(data, list):
            raise ParseError("a filter is a list of conditions")
        return frozenset(data)
    return frozenset(p for p in text.split(",") if p)


@click.group()
@click.option("--session", "session_path", type=click.Path(dir_okay=False), help="Session JSON file.")
@click.option("--pretty", is_flag=True, help="Indent JSON output.")
@click.option("--depth", default=2, show_default=True, type=click.IntRange(min=0), help="Formula generation depth.")
@click.option("--budget", default=100_000, show_default=True, type=click.IntRange(min=1), help="Enumeration budget.")
@click.pass_context
def cli(ctx, session_path, pretty, depth, budget):
    """Forcing with urelements on finite posets."""
    ctx.obj = Ctx(None, pretty, depth, budget)
    if session_path:
        try:
            text = Path(session_path).read_text(encoding="utf-8")
            session = jsonio.session_from_json(jsonio.load_json(text))
        except (OSError, KeyError) as exc:
            _error(ctx.obj, ParseError(f"cannot load session: {exc}"))
            ctx.exit(2)
        except ParseError as exc:
            _error(ctx.obj, exc)
            ctx.exit(2)
        except UrforcingError as exc:
            _error(ctx.obj, exc)
            ctx.exit(1)
        ctx.obj.session = session
        if "depth" in session.config and ctx.get_parameter_source("depth").name == "DEFAULT":
            ctx.obj.depth = session.config["depth"]
        if "budget" in session.config and ctx.get_parameter_source("budget").name == "DEFAULT":
            ctx.obj.budget = session.config["budget"]


@cli.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.pass_obj
@handled
def validate(obj: Ctx, file):
    """Check a poset, name, ideal or session file."""
    try:
        data = json.loads(Path(file).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ParseError(f"cannot read {file}: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError("expected a JSON object")

    if "elements" in data:
        leq = [tuple(p) for p in data.get("leq", [])]
        v = validate_poset(data["elements"], leq, data.get("top", "1"))
        out = {"kind": "poset", "valid": v is None}
        if v is not None:
            out["violation"] = v.to_json()
    elif "family" in data:
        ok, v = is_a_ideal(jsonio.ideal_from_json(data))
        out = {"kind": "ideal", "valid": ok}
        if v is not None:
            out["violation"] = v
    elif "pname" in data or "name" in data:
        P = jsonio.poset_from_json(data["poset"]) if "poset" in data else obj.poset
        x = jsonio.pname_from_json(data.get("name", data), obj.resolve)
        v = validate_name(P, x)
        out = {"kind": "name", "valid": v is None}
        if v is not None:
            out["violation"] = v.to_json()
    elif "names" in data or "poset" in data:
        try:
            session = jsonio.session_from_json(data)
        except PosetError as exc:
            obj.emit({"kind": "session", "valid": False, "violation": exc.violation.to_json()})
            sys.exit(1)
        bad = {}
        for label, x in sorted(session.names.items()):
            v = validate_name(session.poset, x)
            if v is not None:
                bad[label] = v.to_json()
        out = {"kind": "session", "valid": not bad}
        if bad:
            out["violations"] = bad
    else:
        raise ParseError("unrecognised payload")
    obj.emit(out)
    if not out["valid"]:
        sys.exit(1)


@cli.command()
@click.argument("name")
@click.argument("generic")
@click.pass_obj
@handled
def value(obj: Ctx, name, generic):
    """Valuate NAME by the filter GENERIC (comma list or JSON list)."""
    x = _name_arg(obj, name)
    G = _filter_arg(generic)
    obj.poset.check(*G)
    obj.emit(jsonio.value_to_json(valuate(x, G)))


@cli.command()
@click.argument("condition")
@click.argument("formula")
@click.option("--star/--semantic", default=True, help="Syntactic (default) or semantic relation.")
@click.pass_obj
@handled
def forces(obj: Ctx, condition, formula, star):
    """Does CONDITION force FORMULA?  The pool is the session names plus the formula's constants."""
    phi = jsonio.formula_from_json(_read(formula), obj.resolve)
    seeds = list(obj.session.names.values()) if obj.session else []
    pool = close_pool(obj.poset, seeds + list(constants(phi)), budget=obj.budget)
    engine = ForcingEngine(pool)
    result = engine.forces_star(condition, phi) if star else engine.forces(condition, phi)
    obj.emit(result)


@cli.command()
@click.pass_obj
@handled
def generics(obj: Ctx):
    """List the generic filters of the session poset."""
    obj.emit([sorted(G) for G in obj.poset.generic_filters()])


@cli.command("mix")
@click.argument("mapping")
@click.pass_obj
@handled
def mix_cmd(obj: Ctx, mapping):
    """Mix a JSON object {condition: name} over an antichain."""
    data = _read(mapping)
    if not isinstance(data, dict):
        raise ParseError("mixture input must map conditions to names")
    P = obj.poset
    f = {p: jsonio.pname_from_json(x, obj.resolve) for p, x in data.items()}
    P.check(*f)
    obj.emit(jsonio.pname_to_json(mix(P, f)))


@cli.command("purify")
@click.argument("name")
@click.argument("keep")
@click.pass_obj
@handled
def purify_cmd(obj: Ctx, name, keep):
    """Drop urelement entries outside KEEP (comma list of urelement ids)."""
    from .hfu import Urelement

    x = _name_arg(obj, name)
    A = frozenset(Urelement(a) for a in keep.split(",") if a)
    obj.emit(jsonio.pname_to_json(purify(x, A)))


@cli.command()
@click.argument("name")
@click.pass_obj
@handled
def setpart(obj: Ctx, name):
    """Set-counterpart of NAME over the session poset."""
    x = _name_arg(obj, name)
    obj.emit(jsonio.pname_to_json(set_counterpart(obj.poset, x)))


@cli.command("j")
@click.argument("legacy")
@click.pass_obj
@handled
def j_cmd(obj: Ctx, legacy):
    """Translate a legacy name into the new calculus."""
    t = jsonio.lname_from_json(_read(legacy))
    obj.emit(jsonio.pname_to_json(embed_j(obj.poset, t)))


@cli.command()
@click.argument("suite", type=click.Choice(sorted(SUITES) + ["all"]))
@click.pass_obj
@handled
def check(obj: Ctx, suite):
    """Run a verification suite; exit 0 iff it finds no counterexamples."""
    names = sorted(SUITES) if suite == "all" else [suite]
    reports: list[Report] = []
    for name in names:
        kwargs = {}
        if name == "forcing-theorem":
            kwargs["depth"] = obj.depth
            if obj.session and obj.session.names:
                seeds = [obj.session.names[k] for k in sorted(obj.session.names)]
                kwargs["extra"] = [(seeds, close_pool(obj.poset, seeds, budget=obj.budget))]
        reports.append(run_suite(name, **kwargs))
    if suite == "all":
        out = {"passed": all(r.passed for r in reports), "suites": [r.to_json() for r in reports]}
    else:
        out = reports[0].to_json()
    obj.emit(out)
    if not out["passed"]:
        sys.exit(1)


@cli.command()
@click.option("--format", "fmt", type=click.Choice(["json", "dot"]), default="json", show_default=True)
@click.pass_obj
def diagram(obj: Ctx, fmt):
    """Emit the implication diagram between the urelement axioms."""
    if fmt == "dot":
        click.echo(to_dot(), nl=False)
    else:
        obj.emit(diagram_json())


def main() -> None:
    cli(prog_name="urforcing")


if __name__ == "__main__":
    main()
