"""Finite-pool versions of the urelement axiom machinery.

Ideals over a finite urelement pool, swap permutations that preserve them,
homogeneity automorphisms, duplicates and tails, principal ultrapowers with
the Łoś comparison, and the implication diagram between the axioms as data.

Note that with a nonempty finite pool no family is an ideal: the singletons
must be members and their union is the excluded full pool.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import UrforcingError
from .formula import And, Atom, Formula, IsUr, Not, atom_holds, holds
from .hfu import Automorphism, Urelement


class AxiomLabError(UrforcingError):
    code = "PRECONDITION"


class NoSwapAvailable(AxiomLabError):
    code = "NO_SWAP_AVAILABLE"


def _sorted(urs: Iterable[Urelement]) -> list:
    return sorted(urs, key=lambda a: a.key)


def _ids(urs: Iterable[Urelement]) -> list:
    return [a.id for a in _sorted(urs)]


# ideals ---------------------------------------------------------------


@dataclass(frozen=True)
class Ideal:
    pool: frozenset
    family: frozenset  # of frozensets of urelements

    def __contains__(self, s) -> bool:
        return frozenset(s) in self.family

    def image(self, pi: Automorphism) -> frozenset:
        return frozenset(pi.image(s) for s in self.family)


def ideal_violation(I: Ideal) -> dict | None:
    """First failed closure condition, as ``{"condition", "witness"}``."""
    for s in sorted(I.family, key=lambda s: (len(s), _ids(s))):
        if not s <= I.pool:
            return {"condition": "within-pool", "witness": [_ids(s)]}
    if I.pool in I.family:
        return {"condition": "full-pool-excluded", "witness": [_ids(I.pool)]}
    fam = sorted(I.family, key=lambda s: (len(s), _ids(s)))
    for s, t in itertools.combinations_with_replacement(fam, 2):
        if s | t not in I.family:
            return {"condition": "union-closed", "witness": [_ids(s), _ids(t)]}
    for s in fam:
        for k in range(len(s)):
            for sub in itertools.combinations(_sorted(s), k):
                if frozenset(sub) not in I.family:
                    return {"condition": "subset-closed", "witness": [_ids(s), _ids(sub)]}
    for a in _sorted(I.pool):
        if frozenset([a]) not in I.family:
            return {"condition": "singletons", "witness": [[a.id]]}
    return None


def is_a_ideal(I: Ideal) -> tuple[bool, dict | None]:
    v = ideal_violation(I)
    return v is None, v


def swap_conditions(pi: Automorphism, a: Urelement, A: frozenset, I: Ideal) -> dict:
    return {
        "preserves_ideal": I.image(pi) == I.family,
        "moves_a": pi(a) != a,
        "fixes_rest": pi.fixes_pointwise(A - {a}),
    }


def ideal_swap(a: Urelement, A: Iterable[Urelement], I: Ideal) -> Automorphism:
    """A transposition of ``a`` with some ``a'`` outside ``A`` that maps ``I`` onto itself."""
    A = frozenset(A)
    if a not in A:
        raise AxiomLabError(f"{a!r} is not in {_ids(A)}")
    if A not in I.family:
        raise AxiomLabError(f"{_ids(A)} is not in the family")
    outside = _sorted(I.pool - A)
    if not outside:
        raise NoSwapAvailable(f"no urelement of the pool lies outside {_ids(A)}")
    for b in outside:
        pi = Automorphism.swap(I.pool, a, b)
        if all(swap_conditions(pi, a, A, I).values()):
            return pi
    raise NoSwapAvailable(f"no transposition of {a!r} preserves the family")


def homogeneity_automorphism(
    A: Iterable[Urelement],
    B: Iterable[Urelement],
    C: Iterable[Urelement],
    pool: Iterable[Urelement] = (),
) -> Automorphism | None:
    """Permutation sending ``B`` onto ``C`` and fixing ``A``; ``None`` if sizes differ.

    Pairs ``B - C`` with ``C - B`` in sorted order, so the result is an
    involution.
    """
    A, B, C = frozenset(A), frozenset(B), frozenset(C)
    if A & (B | C):
        raise AxiomLabError("B and C must be disjoint from A")
    if len(B) != len(C):
        return None
    universe = frozenset(pool) | A | B | C
    mapping = {}
    for b, c in zip(_sorted(B - C), _sorted(C - B)):
        mapping[b], mapping[c] = c, b
    return Automorphism(universe, mapping)


def duplicate_of(pool: Iterable[Urelement], A: Iterable[Urelement]) -> frozenset | None:
    """A subset of the pool disjoint from ``A`` with the same size, if any."""
    A = frozenset(A)
    rest = _sorted(frozenset(pool) - A)
    if len(rest) < len(A):
        return None
    return frozenset(rest[: len(A)])


def tail_of(pool: Iterable[Urelement], A: Iterable[Urelement]) -> frozenset:
    """Over a finite pool the only tail is the complement.

    A tail must absorb ``pool - A`` injectively while staying inside it.
    """
    return frozenset(pool) - frozenset(A)


def is_tail(pool: Iterable[Urelement], A: Iterable[Urelement], B: Iterable[Urelement]) -> bool:
    """Brute-force tail test: disjoint, and every disjoint ``C`` injects into ``B``."""
    pool, A, B = frozenset(pool), frozenset(A), frozenset(B)
    if A & B or not B <= pool:
        return False
    rest = _sorted(pool - A)
    return all(len(C) <= len(B) for k in range(len(rest) + 1) for C in itertools.combinations(rest, k))


# ultrapowers ------------------------------------------------------------


@dataclass(frozen=True)
class Ultrafilter:
    """The principal ultrafilter on ``index`` generated by ``generator``."""

    index: tuple
    generator: object

    def __post_init__(self):
        if self.generator not in self.index:
            raise AxiomLabError(f"generator {self.generator!r} not in the index")
        if len(set(self.index)) != len(self.index):
            raise AxiomLabError("index has repeated points")

    def contains(self, S: Iterable) -> bool:
        return self.generator in set(S)


def _expand(phi: Formula) -> Formula:
    """Rewrite ``aeq`` into ``A``, ``=`` and connectives; reject ``sub`` and quantifiers."""
    if isinstance(phi, Atom):
        if phi.kind == "sub":
            raise ValueError("the ultrapower language has no subset atom")
        if phi.kind == "aeq":
            x, y = phi.lhs, phi.rhs
            both_ur = And(And(IsUr(x), IsUr(y)), Atom("eq", x, y))
            neither = And(Not(IsUr(x)), Not(IsUr(y)))
            return Not(And(Not(both_ur), Not(neither)))
        return phi
    if isinstance(phi, IsUr):
        return phi
    if isinstance(phi, Not):
        return Not(_expand(phi.body))
    if isinstance(phi, And):
        return And(_expand(phi.left), _expand(phi.right))
    raise ValueError("the ultrapower check is quantifier-free")


def _vars(phi: Formula) -> list:
    if isinstance(phi, Atom):
        return [t.name for t in (phi.lhs, phi.rhs)]
    if isinstance(phi, IsUr):
        return [phi.term.name]
    if isinstance(phi, Not):
        return _vars(phi.body)
    if isinstance(phi, And):
        return _vars(phi.left) + _vars(phi.right)
    raise ValueError("the ultrapower check is quantifier-free")


class Ultrapower:
    """The quotient of a family of functions on a finite index by ``F``."""

    def __init__(self, fs: Mapping[str, Mapping], F: Ultrafilter):
        self.fs = dict(fs)
        self.F = F
        for label, f in self.fs.items():
            if set(f) != set(F.index):
                raise AxiomLabError(f"function {label!r} is not total on the index")
        # classes under F-almost-everywhere equality; representative = least label
        self.cls: dict[str, str] = {}
        for label in sorted(self.fs):
            for rep in sorted(set(self.cls.values())):
                if self.agree("eq", label, rep):
                    self.cls[label] = rep
                    break
            else:
                self.cls[label] = label

    def agree(self, kind: str, f: str, g: str) -> bool:
        S = [i for i in self.F.index if atom_holds(kind, self.fs[f][i], self.fs[g][i])]
        return self.F.contains(S)

    def is_ur(self, f: str) -> bool:
        return self.F.contains(i for i in self.F.index if isinstance(self.fs[f][i], Urelement))

    def holds(self, phi: Formula) -> bool:
        """Truth in the quotient structure, with ``[f]`` as its representative."""
        if isinstance(phi, Atom):
            f, g = self.cls[phi.lhs.name], self.cls[phi.rhs.name]
            if phi.kind == "eq":
                return f == g
            return self.agree("in", f, g)
        if isinstance(phi, IsUr):
            return self.is_ur(self.cls[phi.term.name])
        if isinstance(phi, Not):
            return not self.holds(phi.body)
        return self.holds(phi.left) and self.holds(phi.right)


def internal_ultrapower(fs: Mapping[str, Mapping], F: Ultrafilter, phi: Formula) -> tuple[bool, bool]:
    """Both sides of the Łoś equivalence for quantifier-free ``phi``.

    Variables of ``phi`` name functions in ``fs``.  The left side evaluates in
    the quotient; the right side asks whether the set of indices where ``phi``
    holds pointwise belongs to ``F``.
    """
    psi = _expand(phi)
    for v in _vars(psi):
        if v not in fs:
            raise AxiomLabError(f"no function named {v!r}")
    left = Ultrapower(fs, F).holds(psi)
    S = [i for i in F.index if holds(phi, {label: f[i] for label, f in fs.items()})]
    return left, F.contains(S)


# implication diagram -------------------------------------------------------


@dataclass(frozen=True)
class DiagramEdge:
    source: str
    target: str
    citation: str

    def to_json(self) -> dict:
        return {"source": self.source, "target": self.target, "citation": self.citation}


_EDGES = (
    ("A is a set", "Tail", "the remaining urelements form a tail"),
    ("A is a set", "DC_<Ord", "choice over a set-sized stock of urelements"),
    ("Plenitude", "Closure&Duplication", "large realized sets give closure and disjoint copies"),
    ("Plenitude", "DC_<Ord", "recursion through extensions of urelement sets"),
    ("Tail", "Collection", "homogeneity moves witness kernels into the tail"),
    ("Closure&Duplication", "Collection", "homogeneity plus a duplicate bounds witness kernels"),
    ("Closure&Duplication", "Duplication", "conjunction elimination"),
    ("DC_<Ord", "Collection", "choose witnesses along a long dependent sequence"),
    ("DC_omega1-scheme", "DC_omega-scheme", "shorter sequences are initial segments"),
    ("Collection", "DC_omega-scheme", "collect one-step witnesses, then choose"),
    ("Collection", "Closure", "collect sets realizing each cardinal below the bound"),
    ("Collection", "RP", "reflect through a collected bound"),
    ("RP", "RP-", "the weak form is an instance"),
    ("RP-", "Collection", "collect inside the reflecting set"),
)

# the chain DC_<Ord -> ... -> DC_kappa-scheme -> ... -> DC_omega1-scheme is drawn
# with ellipses, so it is kept apart from the labelled edges
_ELLIPSES = (("DC_<Ord", "DC_kappa-scheme"), ("DC_kappa-scheme", "DC_omega1-scheme"))


def hierarchy_edges() -> list[DiagramEdge]:
    return [DiagramEdge(*e) for e in _EDGES]


def hierarchy_ellipses() -> list[tuple[str, str]]:
    return list(_ELLIPSES)


def hierarchy_nodes() -> list[str]:
    nodes = {n for e in _EDGES for n in e[:2]} | {n for e in _ELLIPSES for n in e}
    return sorted(nodes)


def diagram_json() -> dict:
    return {
        "nodes": hierarchy_nodes(),
        "edges": [e.to_json() for e in hierarchy_edges()],
        "ellipses": [list(e) for e in hierarchy_ellipses()],
    }


def to_dot() -> str:
    lines = ["digraph implications {"]
    for n in hierarchy_nodes():
        lines.append(f'  "{n}";')
    for e in hierarchy_edges():
        lines.append(f'  "{e.source}" -> "{e.target}" [tooltip="{e.citation}"];')
    for s, t in hierarchy_ellipses():
        lines.append(f'  "{s}" -> "{t}" [style=dotted];')
    lines.append("}")
    return "\n".join(lines) + "\n"
