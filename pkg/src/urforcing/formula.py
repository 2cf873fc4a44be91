"""Abstract syntax for the forcing language and its value-level semantics.

Primitive forms are atomic ``in``, ``eq``, ``sub``, ``aeq`` (same urelement,
or both sets), the urelement predicate, negation, conjunction and the
existential quantifier.  ``Or``, ``Implies`` and ``Forall`` are helper
constructors that expand into primitives.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Union

from .errors import UrforcingError
from .hfu import HfuValue, HSet, Urelement

ATOM_KINDS = ("in", "eq", "sub", "aeq")


class UnboundVariable(UrforcingError):
    code = "UNBOUND_VARIABLE"


@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    """A name (of either calculus) used as a constant symbol."""

    name: object
    label: str | None = None

    def __repr__(self) -> str:
        return self.label or repr(self.name)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Const) and self.name == other.name

    def __hash__(self) -> int:
        return hash(("const", self.name))


Term = Union[Var, Const]


@dataclass(frozen=True)
class Atom:
    kind: str
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if self.kind not in ATOM_KINDS:
            raise ValueError(f"unknown atom kind {self.kind!r}")

    def __repr__(self) -> str:
        op = {"in": "∈", "eq": "=", "sub": "⊆", "aeq": "=A"}[self.kind]
        return f"{self.lhs!r} {op} {self.rhs!r}"


@dataclass(frozen=True)
class IsUr:
    term: Term

    def __repr__(self) -> str:
        return f"A({self.term!r})"


@dataclass(frozen=True)
class Not:
    body: Formula

    def __repr__(self) -> str:
        return f"¬{self.body!r}"


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"({self.left!r} ∧ {self.right!r})"


@dataclass(frozen=True)
class Exists:
    var: str
    body: Formula

    def __repr__(self) -> str:
        return f"∃{self.var} {self.body!r}"


Formula = Union[Atom, IsUr, Not, And, Exists]


def In(lhs: Term, rhs: Term) -> Atom:
    return Atom("in", lhs, rhs)


def Eq(lhs: Term, rhs: Term) -> Atom:
    return Atom("eq", lhs, rhs)


def Sub(lhs: Term, rhs: Term) -> Atom:
    return Atom("sub", lhs, rhs)


def AEq(lhs: Term, rhs: Term) -> Atom:
    return Atom("aeq", lhs, rhs)


def Or(left: Formula, right: Formula) -> Formula:
    return Not(And(Not(left), Not(right)))


def Implies(left: Formula, right: Formula) -> Formula:
    return Not(And(left, Not(right)))


def Forall(var: str, body: Formula) -> Formula:
    return Not(Exists(var, Not(body)))


def free_vars(phi: Formula) -> frozenset:
    if isinstance(phi, Atom):
        return frozenset(t.name for t in (phi.lhs, phi.rhs) if isinstance(t, Var))
    if isinstance(phi, IsUr):
        return frozenset([phi.term.name]) if isinstance(phi.term, Var) else frozenset()
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, And):
        return free_vars(phi.left) | free_vars(phi.right)
    return free_vars(phi.body) - {phi.var}


def constants(phi: Formula) -> frozenset:
    if isinstance(phi, Atom):
        return frozenset(t.name for t in (phi.lhs, phi.rhs) if isinstance(t, Const))
    if isinstance(phi, IsUr):
        return frozenset([phi.term.name]) if isinstance(phi.term, Const) else frozenset()
    if isinstance(phi, Not):
        return constants(phi.body)
    if isinstance(phi, And):
        return constants(phi.left) | constants(phi.right)
    return constants(phi.body)


def size(phi: Formula) -> int:
    if isinstance(phi, (Atom, IsUr)):
        return 1
    if isinstance(phi, Not):
        return 1 + size(phi.body)
    if isinstance(phi, And):
        return 1 + size(phi.left) + size(phi.right)
    return 1 + size(phi.body)


def depth(phi: Formula) -> int:
    if isinstance(phi, (Atom, IsUr)):
        return 0
    if isinstance(phi, Not):
        return 1 + depth(phi.body)
    if isinstance(phi, And):
        return 1 + max(depth(phi.left), depth(phi.right))
    return 1 + depth(phi.body)


def quantifiers(phi: Formula) -> int:
    if isinstance(phi, (Atom, IsUr)):
        return 0
    if isinstance(phi, Not):
        return quantifiers(phi.body)
    if isinstance(phi, And):
        return quantifiers(phi.left) + quantifiers(phi.right)
    return 1 + quantifiers(phi.body)


def _subst_term(t: Term, var: str, repl: Term) -> Term:
    return repl if isinstance(t, Var) and t.name == var else t


def substitute(phi: Formula, var: str, repl: Term) -> Formula:
    """Replace free occurrences of ``var`` by ``repl``."""
    if isinstance(phi, Atom):
        return Atom(phi.kind, _subst_term(phi.lhs, var, repl), _subst_term(phi.rhs, var, repl))
    if isinstance(phi, IsUr):
        return IsUr(_subst_term(phi.term, var, repl))
    if isinstance(phi, Not):
        return Not(substitute(phi.body, var, repl))
    if isinstance(phi, And):
        return And(substitute(phi.left, var, repl), substitute(phi.right, var, repl))
    if phi.var == var:
        return phi
    return Exists(phi.var, substitute(phi.body, var, repl))


def members(v: HfuValue) -> frozenset:
    return v.members if isinstance(v, HSet) else frozenset()


def atom_holds(kind: str, v: HfuValue, w: HfuValue) -> bool:
    if kind == "in":
        return isinstance(w, HSet) and v in w.members
    if kind == "eq":
        return v == w
    if kind == "sub":
        # vacuous for urelements: they have no members
        return members(v) <= members(w)
    if kind == "aeq":
        v_ur, w_ur = isinstance(v, Urelement), isinstance(w, Urelement)
        return (v_ur and w_ur and v == w) or (not v_ur and not w_ur)
    raise ValueError(kind)


def holds(
    phi: Formula,
    env: Mapping[str, HfuValue],
    domain: Iterable[HfuValue] = (),
    const_value: Callable[[object], HfuValue] | None = None,
) -> bool:
    """Truth of ``phi`` over plain values; quantifiers range over ``domain``."""

    def term(t: Term) -> HfuValue:
        if isinstance(t, Var):
            try:
                return env[t.name]
            except KeyError:
                raise UnboundVariable(f"unbound variable {t.name!r}") from None
        if const_value is None:
            raise UnboundVariable(f"no interpretation for constant {t!r}")
        return const_value(t.name)

    if isinstance(phi, Atom):
        return atom_holds(phi.kind, term(phi.lhs), term(phi.rhs))
    if isinstance(phi, IsUr):
        return isinstance(term(phi.term), Urelement)
    if isinstance(phi, Not):
        return not holds(phi.body, env, domain, const_value)
    if isinstance(phi, And):
        return holds(phi.left, env, domain, const_value) and holds(phi.right, env, domain, const_value)
    domain = tuple(domain)
    return any(holds(phi.body, {**env, phi.var: v}, domain, const_value) for v in domain)


def formula_key(phi: Formula) -> str:
    from .jsonio import formula_to_json

    return json.dumps(formula_to_json(phi), sort_keys=True, separators=(",", ":"))
