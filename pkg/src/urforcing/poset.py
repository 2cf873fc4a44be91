"""Finite forcing posets.

Conditions are string ids.  ``leq`` pairs ``(p, q)`` read "p <= q" (p is the
stronger condition); reflexive and transitive pairs may be omitted on input.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

import networkx as nx

from .errors import BudgetExceeded, UrforcingError
from .hfu import DEFAULT_BUDGET, HSet, von_neumann

Filter = frozenset


class PosetError(UrforcingError):
    code = "INVALID_POSET"

    def __init__(self, violation: PosetViolation):
        super().__init__(f"{violation.law}: {violation.witnesses}")
        self.violation = violation


class UnknownCondition(UrforcingError):
    code = "UNKNOWN_CONDITION"


class NotAntichain(UrforcingError):
    code = "NOT_ANTICHAIN"


@dataclass(frozen=True)
class PosetViolation:
    law: str
    witnesses: tuple

    def to_json(self) -> dict:
        return {"law": self.law, "witnesses": list(self.witnesses)}


def _close(elements: list[str], leq: Iterable[tuple[str, str]]) -> set[tuple[str, str]]:
    rel = {(p, p) for p in elements} | set(leq)
    changed = True
    while changed:
        changed = False
        above: dict[str, set[str]] = {p: set() for p in elements}
        for p, q in rel:
            above.setdefault(p, set()).add(q)
        for p, q in list(rel):
            for r in above.get(q, ()):
                if (p, r) not in rel:
                    rel.add((p, r))
                    changed = True
    return rel


def validate_poset(elements: Iterable[str], leq: Iterable[tuple[str, str]], top: str) -> PosetViolation | None:
    """First violated partial-order law after reflexive-transitive closure."""
    elements = list(elements)
    if len(set(elements)) != len(elements):
        dup = sorted(p for p in set(elements) if elements.count(p) > 1)
        return PosetViolation("duplicate-element", tuple(dup[:1]))
    if not elements:
        return PosetViolation("missing-top", ())
    known = set(elements)
    leq = [tuple(pair) for pair in leq]
    for p, q in leq:
        for x in (p, q):
            if x not in known:
                return PosetViolation("unknown-element", (x,))
    rel = _close(elements, leq)
    for p, q in sorted(rel):
        if p != q and (q, p) in rel:
            return PosetViolation("antisymmetry", (p, q))
    if top not in known:
        return PosetViolation("missing-top", (top,))
    for p in sorted(elements):
        if (p, top) not in rel:
            return PosetViolation("top-not-maximum", (p, top))
    return None


class Poset:
    def __init__(self, elements: Iterable[str], leq: Iterable[tuple[str, str]] = (), top: str = "1"):
        elements = list(elements)
        leq = [tuple(pair) for pair in leq]
        violation = validate_poset(elements, leq, top)
        if violation is not None:
            raise PosetError(violation)
        self.elements: tuple[str, ...] = tuple(sorted(elements))
        self.top = top
        rel = _close(list(self.elements), leq)
        self.leq_pairs: frozenset = frozenset(rel)
        below: dict[str, set[str]] = {p: set() for p in self.elements}
        above: dict[str, set[str]] = {p: set() for p in self.elements}
        for p, q in rel:
            below[q].add(p)
            above[p].add(q)
        self.below = {p: frozenset(s) for p, s in below.items()}
        self.above = {p: frozenset(s) for p, s in above.items()}
        self._compat = {
            (p, q): bool(self.below[p] & self.below[q])
            for p in self.elements
            for q in self.elements
        }

    def __repr__(self) -> str:
        return f"Poset({list(self.elements)!r}, top={self.top!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return self.elements == other.elements and self.top == other.top and self.leq_pairs == other.leq_pairs

    def __hash__(self) -> int:
        return hash((self.elements, self.top, self.leq_pairs))

    def __contains__(self, p: object) -> bool:
        return p in self.below

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def check(self, *conds: str) -> None:
        for p in conds:
            if p not in self.below:
                raise UnknownCondition(f"unknown condition {p!r}")

    def leq(self, p: str, q: str) -> bool:
        self.check(p, q)
        return (p, q) in self.leq_pairs

    def compatible(self, p: str, q: str) -> bool:
        try:
            return self._compat[p, q]
        except KeyError:
            self.check(p, q)
            raise

    def incompatible(self, p: str, q: str) -> bool:
        return not self.compatible(p, q)

    @cached_property
    def atoms(self) -> frozenset:
        return frozenset(p for p in self.elements if self.below[p] == {p})

    @cached_property
    def cover_pairs(self) -> list[tuple[str, str]]:
        """Hasse diagram edges ``(lower, upper)``."""
        out = []
        for p, q in sorted(self.leq_pairs):
            if p == q:
                continue
            if not any(r not in (p, q) and (p, r) in self.leq_pairs and (r, q) in self.leq_pairs for r in self.elements):
                out.append((p, q))
        return out

    def is_dense(self, D: Iterable[str]) -> bool:
        return self.is_dense_below(D, self.top)

    def is_dense_below(self, D: Iterable[str], p: str) -> bool:
        D = frozenset(D)
        self.check(p, *D)
        return all(self.below[q] & D for q in self.below[p])

    def dense_below_set(self, D: frozenset) -> frozenset:
        """All ``p`` below which ``D`` is dense."""
        return frozenset(p for p in self.elements if all(self.below[q] & D for q in self.below[p]))

    def is_antichain(self, X: Iterable[str]) -> bool:
        X = sorted(set(X))
        self.check(*X)
        return all(not self._compat[p, q] for p, q in itertools.combinations(X, 2))

    def is_maximal_antichain(self, X: Iterable[str]) -> bool:
        X = frozenset(X)
        return self.is_antichain(X) and all(any(self._compat[p, x] for x in X) for p in self.elements)

    def maximal_antichains(self) -> list[frozenset]:
        graph = nx.Graph()
        graph.add_nodes_from(self.elements)
        graph.add_edges_from(
            (p, q) for p, q in itertools.combinations(self.elements, 2) if not self._compat[p, q]
        )
        return sorted((frozenset(c) for c in nx.find_cliques(graph)), key=sorted)

    def upward_closure(self, X: Iterable[str]) -> frozenset:
        out: set[str] = set()
        for p in X:
            out |= self.above[p]
        return frozenset(out)

    def is_filter(self, F: Iterable[str]) -> bool:
        F = frozenset(F)
        if self.top not in F or not F <= set(self.elements):
            return False
        if any(not self.above[p] <= F for p in F):
            return False
        return all(self.below[p] & self.below[q] & F for p in F for q in F)

    def generic_filters(self) -> list[Filter]:
        return sorted((self.above[t] for t in self.atoms), key=sorted)

    def condition_value(self, p: str) -> HSet:
        """A pure hereditarily finite set coding ``p``: the ordinal of its index."""
        self.check(p)
        return von_neumann(self.elements.index(p))

    def to_json(self) -> dict:
        leq = [[p, q] for p, q in self.cover_pairs]
        return {"elements": list(self.elements), "leq": leq, "top": self.top}

    @classmethod
    def from_json(cls, data: dict) -> Poset:
        return cls(data["elements"], [tuple(pair) for pair in data.get("leq", [])], data["top"])


def all_filters(P: Poset, budget: int = DEFAULT_BUDGET) -> list[Filter]:
    """Every filter of ``P`` by subset enumeration."""
    if 2 ** len(P) > budget:
        raise BudgetExceeded(f"{2 ** len(P)} subsets exceeds budget {budget}")
    rest = [p for p in P.elements if p != P.top]
    out = []
    for size in range(len(rest) + 1):
        for combo in itertools.combinations(rest, size):
            F = frozenset(combo) | {P.top}
            if P.is_filter(F):
                out.append(F)
    return out


def dense_subsets(P: Poset, budget: int = DEFAULT_BUDGET) -> list[frozenset]:
    if 2 ** len(P) > budget:
        raise BudgetExceeded(f"{2 ** len(P)} subsets exceeds budget {budget}")
    out = []
    for size in range(len(P) + 1):
        for combo in itertools.combinations(P.elements, size):
            if P.is_dense(combo):
                out.append(frozenset(combo))
    return out


def meets_every_dense_set(P: Poset, F: Filter, dense: list[frozenset] | None = None) -> bool:
    dense = dense_subsets(P) if dense is None else dense
    return all(F & D for D in dense)


def _pfun_id(f: dict) -> str:
    if not f:
        return "{}"
    return ",".join(f"{k}={v}" for k, v in sorted(f.items()))


def fn_poset(x: Iterable[str], budget: int = DEFAULT_BUDGET) -> Poset:
    """Finite partial functions from ``x`` to 2, ordered by reverse inclusion."""
    x = sorted(set(x))
    if 3 ** len(x) > budget:
        raise BudgetExceeded(f"{3 ** len(x)} partial functions exceeds budget {budget}")
    funcs = []
    for choice in itertools.product((None, 0, 1), repeat=len(x)):
        funcs.append({k: v for k, v in zip(x, choice) if v is not None})
    ids = [_pfun_id(f) for f in funcs]
    leq = [
        (_pfun_id(f), _pfun_id(g))
        for f in funcs
        for g in funcs
        if f != g and all(f.get(k) == v for k, v in g.items())
    ]
    return Poset(ids, leq, "{}")


def chain(n: int) -> Poset:
    """``1 > c1 > ... > c(n-1)``."""
    ids = ["1"] + [f"c{i}" for i in range(1, n)]
    return Poset(ids, list(zip(ids[1:], ids[:-1])), "1")


def flat(n: int) -> Poset:
    """Top plus ``n`` pairwise incompatible atoms."""
    atoms = [f"p{i}" for i in range(n)]
    return Poset(["1", *atoms], [(a, "1") for a in atoms], "1")


P2 = Poset(["1", "p", "q"], [("p", "1"), ("q", "1")], "1")


def enumerate_posets(n: int) -> Iterator[Poset]:
    """Posets with a top element on ``n`` points.

    Every finite poset has a linear extension, so restricting strict pairs to
    index order ``i > j`` (element ``i`` below element ``j``) reaches every
    order type; isomorphic copies may repeat.
    """
    if n < 1:
        return
    ids = ["1"] + [f"e{i}" for i in range(1, n)]
    pairs = [(i, j) for i in range(1, n) for j in range(1, i)]
    for mask in range(2 ** len(pairs)):
        strict = {pairs[k] for k in range(len(pairs)) if mask >> k & 1}
        if any((i, j) in strict and (j, k) in strict and (i, k) not in strict
               for i in range(n) for j in range(n) for k in range(n)):
            continue
        leq = [(ids[i], ids[j]) for i, j in strict] + [(ids[i], "1") for i in range(1, n)]
        yield Poset(ids, leq, "1")
