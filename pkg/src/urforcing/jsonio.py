"""JSON encodings.

Values: ``{"ur": id}`` or ``{"set": [...]}`` with members in canonical order.
Names: ``{"pname": [[entry, cond], ...]}`` where an entry is ``{"ur": id}`` or
another name; legacy names use ``"lname"`` and bare ``{"ur": id}``.  Inside a
session, a string wherever a name is expected refers to a labelled name.
"""
from __future__ import annotations

import json
from typing import Callable, Mapping

from .errors import UrforcingError
from .formula import And, Atom, Const, Exists, Formula, IsUr, Not, Var
from .hfu import HfuValue, Urelement, make_set
from .names import LName, PName
from .poset import Poset


class ParseError(UrforcingError):
    code = "PARSE_ERROR"


def dumps(obj, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(obj, indent=2, ensure_ascii=False)
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise ParseError(msg)


# values -------------------------------------------------------------


def value_to_json(v: HfuValue) -> dict:
    if isinstance(v, Urelement):
        return {"ur": v.id}
    return {"set": [value_to_json(m) for m in v.sorted_members]}


def value_from_json(data) -> HfuValue:
    _expect(isinstance(data, dict) and len(data) == 1, f"bad value {data!r}")
    if "ur" in data:
        return Urelement(data["ur"])
    _expect("set" in data and isinstance(data["set"], list), f"bad value {data!r}")
    return make_set(value_from_json(m) for m in data["set"])


def pool_from_json(data) -> frozenset:
    if isinstance(data, dict):
        data = data.get("pool")
    _expect(isinstance(data, list), "pool must be a list of urelement ids")
    return frozenset(Urelement(a) for a in data)


# names --------------------------------------------------------------


def entry_to_json(e) -> dict:
    if isinstance(e, Urelement):
        return {"ur": e.id}
    if isinstance(e, LName):
        return lname_to_json(e)
    return pname_to_json(e)


def pname_to_json(x: PName) -> dict:
    return {"pname": [[entry_to_json(e), c] for e, c in x.sorted_entries]}


def lname_to_json(t) -> dict:
    if isinstance(t, Urelement):
        return {"ur": t.id}
    return {"lname": [[entry_to_json(e), c] for e, c in t.sorted_entries]}


Resolver = Callable[[str], object]


def _no_labels(label: str):
    raise ParseError(f"unknown name label {label!r}")


def pname_from_json(data, resolve: Resolver = _no_labels) -> PName:
    if isinstance(data, str):
        x = resolve(data)
        _expect(isinstance(x, PName), f"{data!r} does not label a P-name")
        return x
    _expect(isinstance(data, dict) and isinstance(data.get("pname"), list), f"bad P-name {data!r}")
    entries = []
    for pair in data["pname"]:
        _expect(isinstance(pair, list) and len(pair) == 2 and isinstance(pair[1], str), f"bad entry {pair!r}")
        e, c = pair
        if isinstance(e, dict) and set(e) == {"ur"}:
            entries.append((Urelement(e["ur"]), c))
        else:
            entries.append((pname_from_json(e, resolve), c))
    return PName(frozenset(entries))


def lname_from_json(data, resolve: Resolver = _no_labels):
    if isinstance(data, str):
        return resolve(data)
    _expect(isinstance(data, dict), f"bad legacy name {data!r}")
    if set(data) == {"ur"}:
        return Urelement(data["ur"])
    _expect(isinstance(data.get("lname"), list), f"bad legacy name {data!r}")
    entries = []
    for pair in data["lname"]:
        _expect(isinstance(pair, list) and len(pair) == 2 and isinstance(pair[1], str), f"bad entry {pair!r}")
        entries.append((lname_from_json(pair[0], resolve), pair[1]))
    return LName(frozenset(entries))


# posets -------------------------------------------------------------


def poset_from_json(data) -> Poset:
    _expect(isinstance(data, dict) and "elements" in data, f"bad poset {data!r}")
    leq = data.get("leq", [])
    _expect(all(isinstance(p, list) and len(p) == 2 for p in leq), "leq must be a list of pairs")
    return Poset(data["elements"], [tuple(p) for p in leq], data.get("top", "1"))


def poset_to_json(P: Poset) -> dict:
    return P.to_json()


def filter_to_json(G) -> list:
    return sorted(G)


# formulas -----------------------------------------------------------


def term_to_json(t) -> dict:
    if isinstance(t, Var):
        return {"var": t.name}
    if t.label is not None:
        return {"const": t.label}
    return {"const": entry_to_json(t.name)}


def term_from_json(data, resolve: Resolver = _no_labels, legacy: bool = False):
    _expect(isinstance(data, dict) and len(data) == 1, f"bad term {data!r}")
    if "var" in data:
        return Var(data["var"])
    _expect("const" in data, f"bad term {data!r}")
    c = data["const"]
    name = lname_from_json(c, resolve) if legacy else pname_from_json(c, resolve)
    return Const(name, c if isinstance(c, str) else None)


def formula_to_json(phi: Formula) -> dict:
    if isinstance(phi, Atom):
        return {"atom": {"kind": phi.kind, "lhs": term_to_json(phi.lhs), "rhs": term_to_json(phi.rhs)}}
    if isinstance(phi, IsUr):
        return {"A": term_to_json(phi.term)}
    if isinstance(phi, Not):
        return {"not": formula_to_json(phi.body)}
    if isinstance(phi, And):
        return {"and": [formula_to_json(phi.left), formula_to_json(phi.right)]}
    return {"exists": {"var": phi.var, "body": formula_to_json(phi.body)}}


def formula_from_json(data, resolve: Resolver = _no_labels, legacy: bool = False) -> Formula:
    _expect(isinstance(data, dict) and len(data) == 1, f"bad formula {data!r}")
    (tag, body), = data.items()
    if tag == "atom":
        _expect(isinstance(body, dict), f"bad atom {body!r}")
        try:
            return Atom(
                body["kind"],
                term_from_json(body["lhs"], resolve, legacy),
                term_from_json(body["rhs"], resolve, legacy),
            )
        except (KeyError, ValueError) as exc:
            raise ParseError(f"bad atom {body!r}: {exc}") from None
    if tag == "A":
        return IsUr(term_from_json(body, resolve, legacy))
    if tag == "not":
        return Not(formula_from_json(body, resolve, legacy))
    if tag == "and":
        _expect(isinstance(body, list) and len(body) == 2, "and takes two formulas")
        return And(formula_from_json(body[0], resolve, legacy), formula_from_json(body[1], resolve, legacy))
    if tag == "exists":
        _expect(isinstance(body, dict) and "var" in body and "body" in body, f"bad exists {body!r}")
        return Exists(body["var"], formula_from_json(body["body"], resolve, legacy))
    raise ParseError(f"unknown formula tag {tag!r}")


# ideals and ultrapowers ---------------------------------------------


def ideal_from_json(data):
    from .axioms import Ideal

    _expect(isinstance(data, dict) and "pool" in data and "family" in data, f"bad ideal {data!r}")
    pool = frozenset(Urelement(a) for a in data["pool"])
    family = frozenset(frozenset(Urelement(a) for a in s) for s in data["family"])
    return Ideal(pool, family)


def ideal_to_json(I) -> dict:
    return {
        "pool": sorted(a.id for a in I.pool),
        "family": sorted((sorted(a.id for a in s) for s in I.family), key=lambda s: (len(s), s)),
    }


def ultrapower_from_json(data):
    """``(functions, ultrafilter)`` from ``{"index","generator","functions"}``."""
    from .axioms import Ultrafilter

    _expect(isinstance(data, dict) and {"index", "generator", "functions"} <= set(data), "bad ultrapower input")
    F = Ultrafilter(tuple(data["index"]), data["generator"])
    fs = {}
    for label, table in sorted(data["functions"].items()):
        _expect(set(table) == set(F.index), f"function {label!r} is not total on the index")
        fs[label] = {i: value_from_json(v) for i, v in table.items()}
    return fs, F


# sessions -----------------------------------------------------------


class Session:
    """A poset, an urelement pool and labelled names loaded from one file."""

    def __init__(self, poset: Poset, urelements: frozenset, names: Mapping[str, PName], config: Mapping):
        self.poset = poset
        self.urelements = urelements
        self.names = dict(names)
        self.config = dict(config)
        for key in ("budget", "depth"):
            if key in self.config:
                _expect(isinstance(self.config[key], int) and self.config[key] > 0, f"config {key} must be positive")
        for label, x in self.names.items():
            stray = x.kernel - urelements if urelements else frozenset()
            _expect(not stray, f"name {label!r} mentions urelements outside the pool")

    def resolve(self, label: str) -> PName:
        try:
            return self.names[label]
        except KeyError:
            raise ParseError(f"unknown name label {label!r}") from None

    def name_pool(self):
        from .names import close_pool

        return close_pool(self.poset, self.names.values())


def session_from_json(data) -> Session:
    _expect(isinstance(data, dict), "session must be an object")
    poset = poset_from_json(data["poset"]) if "poset" in data else Poset(["1"], [], "1")
    urelements = pool_from_json(data.get("pool", []))
    labelled: dict = {}

    def resolve(label: str):
        if label in labelled:
            return labelled[label]
        raw = data.get("names", {})
        _expect(label in raw, f"unknown name label {label!r}")
        labelled[label] = None  # guards against cycles
        x = pname_from_json(raw[label], resolve)
        labelled[label] = x
        return x

    names = {}
    for label in sorted(data.get("names", {})):
        x = resolve(label)
        _expect(x is not None, f"cyclic name label {label!r}")
        names[label] = x
    return Session(poset, urelements, names, data.get("config", {}))


def load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None

