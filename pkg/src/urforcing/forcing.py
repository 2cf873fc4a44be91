"""Forcing over a finite name pool.

:class:`ForcingEngine` evaluates the syntactic relation by computing, for each
closed formula, the whole set of conditions that force it.  Atomic clauses
recurse through name entries (strictly lower rank); the connective and
quantifier clauses recurse into smaller formulas; existential witnesses range
over the pool.

The semantic relation quantifies over generic filters, which over a finite
poset are the upward closures of atoms; satisfaction in an extension lets
quantifiers range over the extension's finite value set.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence, Union

from .errors import UrforcingError
from .formula import (
    ATOM_KINDS,
    And,
    Atom,
    Const,
    Exists,
    Formula,
    IsUr,
    Not,
    Var,
    constants,
    free_vars,
    holds,
    substitute,
)
from .hfu import HfuValue, HSet, Urelement, kernel
from .names import (
    LegacyPool,
    NamePool,
    PName,
    check_name,
    gamma_name,
    legacy_valuate,
    mix,
    sort_names,
    valuate,
)
from .poset import Poset


class ConstantNotInPool(UrforcingError):
    code = "CONSTANT_NOT_IN_POOL"


class NotClosed(UrforcingError):
    code = "UNBOUND_VARIABLE"


AnyPool = Union[NamePool, LegacyPool]


def _require_closed(phi: Formula) -> None:
    fv = free_vars(phi)
    if fv:
        raise NotClosed(f"free variables {sorted(fv)} in {phi!r}")


def _require_constants(pool: AnyPool, phi: Formula) -> None:
    for c in constants(phi):
        if c not in pool:
            raise ConstantNotInPool(f"constant {c!r} is not in the pool")


@dataclass
class Extension:
    """The values a pool takes under one generic filter."""

    pool: AnyPool
    generic: frozenset
    values: frozenset
    valuation: Callable[[object, frozenset], HfuValue] = field(repr=False, default=valuate)

    def value(self, name) -> HfuValue:
        return self.valuation(name, self.generic)

    @property
    def sorted_values(self) -> list:
        return sorted(self.values, key=lambda v: v.key)

    def satisfies(self, phi: Formula, env: dict | None = None) -> bool:
        return holds(phi, env or {}, self.sorted_values, self.value)


def extension(pool: AnyPool, G: Iterable[str]) -> Extension:
    G = frozenset(G)
    if isinstance(pool, LegacyPool):
        return Extension(pool, G, frozenset(legacy_valuate(t, G) for t in pool.names), legacy_valuate)
    return Extension(pool, G, frozenset(valuate(x, G) for x in pool.names), valuate)


def satisfies(ext: Extension, phi: Formula) -> bool:
    return ext.satisfies(phi)


class SemanticForcing:
    """``p`` forces ``phi`` iff ``phi`` holds in every extension by a generic through ``p``."""

    def __init__(self, pool: AnyPool):
        self.pool = pool
        self.poset: Poset = pool.poset
        self.generics = self.poset.generic_filters()
        self.extensions = [extension(pool, G) for G in self.generics]
        self._truth: dict = {}
        self._sets: dict = {}

    def truth(self, G: frozenset, phi: Formula) -> bool:
        key = (G, phi)
        if key not in self._truth:
            ext = self.extensions[self.generics.index(G)]
            self._truth[key] = ext.satisfies(phi)
        return self._truth[key]

    def semantic_set(self, phi: Formula) -> frozenset:
        if phi not in self._sets:
            true_in = [G for G in self.generics if self.truth(G, phi)]
            self._sets[phi] = frozenset(
                p for p in self.poset.elements
                if all(G in true_in for G in self.generics if p in G)
            )
        return self._sets[phi]

    def forces(self, p: str, phi: Formula) -> bool:
        self.poset.check(p)
        _require_closed(phi)
        _require_constants(self.pool, phi)
        return p in self.semantic_set(phi)


class ForcingEngine(SemanticForcing):
    """Both forcing relations over one :class:`NamePool`."""

    def __init__(self, pool: NamePool):
        super().__init__(pool)
        self._star: dict = {}
        self._atoms: dict = {}

    # atomic clauses -------------------------------------------------

    def _ur_set(self, x: PName) -> frozenset:
        key = ("A", x)
        if key not in self._atoms:
            P = self.poset
            D: set = set()
            for _, r in x.urelement_entries:
                D |= P.below[r]
            self._atoms[key] = P.dense_below_set(frozenset(D))
        return self._atoms[key]

    def _aeq_set(self, x1: PName, x2: PName) -> frozenset:
        key = ("aeq", x1, x2)
        if key not in self._atoms:
            P = self.poset
            D: set = set()
            for a, r1 in x1.urelement_entries:
                for b, r2 in x2.urelement_entries:
                    if a == b:
                        D |= P.below[r1] & P.below[r2]
            ur_conds = [r for _, r in x1.urelement_entries] + [r for _, r in x2.urelement_entries]
            D |= {q for q in P.elements if all(P.incompatible(q, r) for r in ur_conds)}
            self._atoms[key] = P.dense_below_set(frozenset(D))
        return self._atoms[key]

    def _in_set(self, x1: PName, x2: PName) -> frozenset:
        key = ("in", x1, x2)
        if key not in self._atoms:
            P = self.poset
            D: set = set()
            for y, r in x2.name_entries:
                D |= P.below[r] & self._eq_set(y, x1)
            self._atoms[key] = P.dense_below_set(frozenset(D))
        return self._atoms[key]

    def _sub_set(self, x1: PName, x2: PName) -> frozenset:
        key = ("sub", x1, x2)
        if key not in self._atoms:
            P = self.poset
            S = set(P.elements)
            for y, r in x1.name_entries:
                in_set = self._in_set(y, x2)
                S = {p for p in S if (P.below[p] & P.below[r]) <= in_set}
            self._atoms[key] = frozenset(S)
        return self._atoms[key]

    def _eq_set(self, x1: PName, x2: PName) -> frozenset:
        key = ("eq", x1, x2)
        if key not in self._atoms:
            self._atoms[key] = self._sub_set(x1, x2) & self._sub_set(x2, x1) & self._aeq_set(x1, x2)
        return self._atoms[key]

    def atom_set(self, kind: str, x1: PName, x2: PName) -> frozenset:
        return {
            "in": self._in_set,
            "eq": self._eq_set,
            "sub": self._sub_set,
            "aeq": self._aeq_set,
        }[kind](x1, x2)

    # compound clauses -----------------------------------------------

    def star_set(self, phi: Formula) -> frozenset:
        """Conditions ``p`` with ``p ⊩* phi`` (``phi`` closed)."""
        cached = self._star.get(phi)
        if cached is not None:
            return cached
        P = self.poset
        if isinstance(phi, Atom):
            out = self.atom_set(phi.kind, _const(phi.lhs), _const(phi.rhs))
        elif isinstance(phi, IsUr):
            out = self._ur_set(_const(phi.term))
        elif isinstance(phi, Not):
            inner = self.star_set(phi.body)
            out = frozenset(p for p in P.elements if not (P.below[p] & inner))
        elif isinstance(phi, And):
            out = self.star_set(phi.left) & self.star_set(phi.right)
        elif isinstance(phi, Exists):
            D: set = set()
            for z in self.pool.sorted_names:
                D |= self.star_set(substitute(phi.body, phi.var, Const(z)))
            out = P.dense_below_set(frozenset(D))
        else:
            raise TypeError(f"not a formula: {phi!r}")
        self._star[phi] = out
        return out

    def forces_star(self, p: str, phi: Formula) -> bool:
        self.poset.check(p)
        _require_closed(phi)
        _require_constants(self.pool, phi)
        return p in self.star_set(phi)


def _const(t) -> PName:
    if isinstance(t, Var):
        raise NotClosed(f"unbound variable {t.name!r}")
    return t.name


@lru_cache(maxsize=32)
def engine_for(pool: AnyPool) -> SemanticForcing:
    if isinstance(pool, LegacyPool):
        return SemanticForcing(pool)
    return ForcingEngine(pool)


def forces_star(pool: NamePool, p: str, phi: Formula) -> bool:
    return engine_for(pool).forces_star(p, phi)


def forces_semantic(pool: AnyPool, p: str, phi: Formula) -> bool:
    """``p ⊩ phi``; over a :class:`LegacyPool` this is the legacy relation."""
    return engine_for(pool).forces(p, phi)


forces_star_legacy = forces_semantic


# forcing theorem checker ---------------------------------------------


@dataclass
class Report:
    name: str
    checked: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def fail(self, record: dict) -> None:
        self.counterexamples.append(record)

    def merge(self, other: Report) -> None:
        self.checked += other.checked
        self.counterexamples.extend(other.counterexamples)

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "counterexamples": self.counterexamples,
        }


def check_forcing_theorem(pool: NamePool, formulas: Iterable[Formula], report: Report | None = None) -> Report:
    """Compare both forcing relations and the truth lemma on every instance.

    Also checks that each forcing set is downward closed, closed under density,
    and disjoint from the forcing set of the negation.
    """
    from .jsonio import formula_to_json

    report = report or Report("forcing-theorem")
    engine = engine_for(pool)
    P = pool.poset
    for phi in formulas:
        _require_closed(phi)
        _require_constants(pool, phi)
        star = engine.star_set(phi)
        sem = engine.semantic_set(phi)
        neg = engine.star_set(Not(phi))
        for p in P.elements:
            report.checked += 1
            if (p in star) != (p in sem):
                report.fail({
                    "check": "star-vs-semantic",
                    "condition": p,
                    "formula": formula_to_json(phi),
                    "star": p in star,
                    "semantic": p in sem,
                })
            if p in star and any(q not in star for q in P.below[p]):
                report.fail({"check": "monotonicity", "condition": p, "formula": formula_to_json(phi)})
            if p not in star and P.below[p] and all(P.below[q] & star for q in P.below[p]):
                report.fail({"check": "density", "condition": p, "formula": formula_to_json(phi)})
            if p in star and p in neg:
                report.fail({"check": "negation-coherence", "condition": p, "formula": formula_to_json(phi)})
        for G in engine.generics:
            report.checked += 1
            true = engine.truth(G, phi)
            forced = bool(G & star)
            if true != forced:
                report.fail({
                    "check": "truth-lemma",
                    "generic": sorted(G),
                    "formula": formula_to_json(phi),
                    "true": true,
                    "forced_by_member": forced,
                })
    return report


# witnesses -----------------------------------------------------------


def find_witness(pool: NamePool, p: str, exists_phi: Exists) -> PName | None:
    """A single pool-built name witnessing ``exists_phi`` at ``p``.

    If one pool name already works at ``p`` it is returned.  Otherwise a
    maximal antichain is chosen among the conditions below ``p`` that force an
    instance, and the chosen instances are mixed.  Returns ``None`` when ``p``
    does not force ``exists_phi`` or when the mixture cannot be certified.
    """
    if not isinstance(exists_phi, Exists):
        raise TypeError("find_witness needs an existential formula")
    engine = engine_for(pool)
    P = pool.poset
    if not engine.forces(p, exists_phi):
        return None
    body, var = exists_phi.body, exists_phi.var
    witness: dict[str, PName] = {}
    for z in pool.sorted_names:
        for q in engine.semantic_set(substitute(body, var, Const(z))):
            if q in P.below[p]:
                witness.setdefault(q, z)
    if p in witness:
        return witness[p]
    # coarsest conditions first, so the antichain is as small as possible
    order = sorted(witness, key=lambda q: (-len(P.below[q]), q))
    antichain: list[str] = []
    for q in order:
        if all(P.incompatible(q, r) for r in antichain):
            antichain.append(q)
    v = mix(P, {q: witness[q] for q in antichain})
    extended = pool.extended([v])
    if not forces_semantic(extended, p, substitute(body, var, Const(v))):
        return None
    return v


def legacy_find_witness(pool: LegacyPool, p: str, exists_phi: Exists, candidates: Iterable = ()):
    """First legacy name (pool names, then ``candidates``) witnessing ``exists_phi`` at ``p``."""
    engine = engine_for(pool)
    if not engine.forces(p, exists_phi):
        return None
    for t in pool.sorted_names:
        if forces_semantic(pool, p, substitute(exists_phi.body, exists_phi.var, Const(t))):
            return t
    extra = [t for t in sort_names(set(candidates)) if t not in pool]
    if extra:
        from .names import close_legacy_pool

        for t in extra:
            bigger = close_legacy_pool(pool.poset, list(pool.names) + [t])
            if forces_semantic(bigger, p, substitute(exists_phi.body, exists_phi.var, Const(t))):
                return t
    return None


# extensions ------------------------------------------------------------


def build_extension(pool: NamePool, G: Iterable[str]) -> tuple[Extension, dict]:
    """The extension by ``G`` together with finite-scale structural checks.

    Report keys: ``ground_included`` (every value with a check-name in the pool
    is present), ``generic_included`` (``None`` unless the pool holds the
    generic's canonical name), ``transitive``, ``urelements_preserved``,
    ``kernel_bound`` and ``urelement_sets_covered``.
    """
    P = pool.poset
    G = frozenset(G)
    if G not in P.generic_filters():
        raise UrforcingError(f"{sorted(G)} is not a generic filter")
    ext = extension(pool, G)
    values = ext.values

    ground = [x for x in pool.names if x == check_name(P, valuate(x, G))]
    ground_ok = all(valuate(x, G) in values for x in ground)

    gamma = gamma_name(P)
    generic_ok = None
    if gamma in pool:
        generic_ok = valuate(gamma, G) == HSet(frozenset(P.condition_value(p) for p in G))

    transitive = all(m in values for v in values if isinstance(v, HSet) for m in v.members)

    pool_urs = pool.kernel
    value_urs = frozenset(v for v in values if isinstance(v, Urelement))
    value_kernel: set = set()
    for v in values:
        value_kernel |= kernel(v)
    urs_ok = value_urs == pool_urs == frozenset(value_kernel)

    kernel_ok = all(kernel(valuate(x, G)) <= x.kernel for x in pool.names)

    covered = all(
        v.members <= pool_urs
        for v in values
        if isinstance(v, HSet) and all(isinstance(m, Urelement) for m in v.members)
    )
    report = {
        "ground_included": ground_ok,
        "generic_included": generic_ok,
        "transitive": transitive,
        "urelements_preserved": urs_ok,
        "kernel_bound": kernel_ok,
        "urelement_sets_covered": covered,
    }
    return ext, report


# formula generation ----------------------------------------------------

VAR_NAMES = ("x", "y", "z", "w")


def _atoms(terms: Sequence, kinds: Sequence[str], unary: bool) -> list:
    out = [IsUr(t) for t in terms] if unary else []
    out += [Atom(k, s, t) for k in kinds for s in terms for t in terms]
    return out


def generate_formulas(
    terms: Sequence,
    depth: int = 2,
    max_quantifiers: int = 2,
    kinds: Sequence[str] = ATOM_KINDS,
    unary: bool = True,
    max_conjunctions: int = 40,
    seed: int = 0,
) -> list:
    """Deterministic formula family over ``terms``.

    Contains every atom, every negation and existential closure up to
    ``depth`` connective/quantifier layers, and a seeded sample of at most
    ``max_conjunctions`` conjunctions per layer.  Free variables of the
    results are only those already among ``terms``.
    """
    rng = random.Random(seed)
    base_free = frozenset(t.name for t in terms if isinstance(t, Var))

    @lru_cache(maxsize=None)
    def gen(d: int, bound: tuple, q: int) -> tuple:
        layer_terms = list(terms) + [Var(v) for v in bound]
        if d == 0:
            return tuple(_atoms(layer_terms, kinds, unary))
        lower = gen(d - 1, bound, q)
        out = list(lower)
        seen = set(out)

        def add(phi):
            if phi not in seen:
                seen.add(phi)
                out.append(phi)

        for phi in lower:
            if not isinstance(phi, Not):
                add(Not(phi))
        if q > 0 and len(bound) < len(VAR_NAMES):
            v = VAR_NAMES[len(bound)]
            for phi in gen(d - 1, bound + (v,), q - 1):
                if v in free_vars(phi):
                    add(Exists(v, phi))
        pairs = list(itertools.combinations(range(len(lower)), 2))
        for i, k in sorted(rng.sample(pairs, min(max_conjunctions, len(pairs)))):
            add(And(lower[i], lower[k]))
        return tuple(out)

    return [phi for phi in gen(depth, (), max_quantifiers) if free_vars(phi) <= base_free]
