"""P-names with urelements, legacy names, and the constructions on them.

A :class:`PName` is a finite set of ``(entry, condition)`` pairs where the
entry is a urelement or another ``PName``.  A urelement entry ``(a, p)`` says
the name *is* ``a`` once ``p`` is in the generic, so it must be incompatible
with every entry carrying anything other than ``a``.

A legacy name is either a bare urelement or an :class:`LName` whose entries
are legacy names; there a urelement entry contributes a *member*.

Plumbing that is not part of either calculus proper: :func:`act` (automorphism
action on names) and :func:`gamma_name` (the canonical name for the generic).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping, Union

from .errors import BudgetExceeded, UrforcingError
from .hfu import DEFAULT_BUDGET, Automorphism, HfuValue, HSet, Urelement, make_set
from .poset import NotAntichain, Poset


class InvalidName(UrforcingError):
    code = "INVALID_NAME"


class MalformedValuation(UrforcingError):
    code = "AMBIGUOUS_URELEMENT"


class PoolError(UrforcingError):
    code = "POOL_NOT_CLOSED"


def _entry_key(pair) -> tuple[str, str]:
    entry, cond = pair
    return entry.key, cond


@dataclass(frozen=True)
class PName:
    entries: frozenset

    def __repr__(self) -> str:
        return "{" + ", ".join(f"({e!r},{c})" for e, c in self.sorted_entries) + "}"

    @cached_property
    def sorted_entries(self) -> tuple:
        return tuple(sorted(self.entries, key=_entry_key))

    @cached_property
    def key(self) -> str:
        return "N{" + ",".join(f"{e.key}:{c}" for e, c in self.sorted_entries) + "}"

    @cached_property
    def urelement_entries(self) -> tuple:
        return tuple(pair for pair in self.sorted_entries if isinstance(pair[0], Urelement))

    @cached_property
    def name_entries(self) -> tuple:
        return tuple(pair for pair in self.sorted_entries if isinstance(pair[0], PName))

    @cached_property
    def rank(self) -> int:
        return max((entry_rank(e) + 1 for e, _ in self.entries), default=0)

    @cached_property
    def kernel(self) -> frozenset:
        out: set = set()
        for e, _ in self.entries:
            out |= {e} if isinstance(e, Urelement) else e.kernel
        return frozenset(out)

    @cached_property
    def conditions(self) -> frozenset:
        out = {c for _, c in self.entries}
        for e, _ in self.name_entries:
            out |= e.conditions
        return frozenset(out)

    def subnames(self) -> frozenset:
        """Every ``PName`` reachable through entries, excluding ``self``."""
        out: set = set()
        stack = [e for e, _ in self.name_entries]
        while stack:
            y = stack.pop()
            if y in out:
                continue
            out.add(y)
            stack.extend(e for e, _ in y.name_entries)
        return frozenset(out)


@dataclass(frozen=True)
class LName:
    entries: frozenset

    def __repr__(self) -> str:
        return "#{" + ", ".join(f"({e!r},{c})" for e, c in self.sorted_entries) + "}"

    @cached_property
    def sorted_entries(self) -> tuple:
        return tuple(sorted(self.entries, key=_entry_key))

    @cached_property
    def key(self) -> str:
        return "L{" + ",".join(f"{e.key}:{c}" for e, c in self.sorted_entries) + "}"

    @cached_property
    def rank(self) -> int:
        return max((entry_rank(e) + 1 for e, _ in self.entries), default=0)

    @cached_property
    def kernel(self) -> frozenset:
        out: set = set()
        for e, _ in self.entries:
            out |= {e} if isinstance(e, Urelement) else e.kernel
        return frozenset(out)

    def subnames(self) -> frozenset:
        """Reachable legacy names (urelements included), excluding ``self``."""
        out: set = set()
        stack = [e for e, _ in self.entries]
        while stack:
            y = stack.pop()
            if y in out:
                continue
            out.add(y)
            if isinstance(y, LName):
                stack.extend(e for e, _ in y.entries)
        return frozenset(out)


LegacyName = Union[Urelement, LName]

EMPTY_NAME = PName(frozenset())
EMPTY_LNAME = LName(frozenset())


def entry_rank(e) -> int:
    return 0 if isinstance(e, Urelement) else e.rank


def pname(*pairs) -> PName:
    return PName(frozenset(pairs))


def lname(*pairs) -> LName:
    return LName(frozenset(pairs))


def name_key(x) -> str:
    return x.key


def sort_names(names: Iterable) -> list:
    return sorted(names, key=name_key)


@dataclass(frozen=True)
class NameViolation:
    """Two entries of one name breaking the incompatibility requirement.

    ``path`` lists the entry conditions walked from the root to the offending
    name (empty when the root itself is at fault).
    """

    path: tuple
    name: PName
    first: tuple
    second: tuple | None
    reason: str

    def to_json(self) -> dict:
        from .jsonio import pname_to_json, entry_to_json

        out = {
            "reason": self.reason,
            "path": list(self.path),
            "name": pname_to_json(self.name),
            "first": [entry_to_json(self.first[0]), self.first[1]],
        }
        if self.second is not None:
            out["second"] = [entry_to_json(self.second[0]), self.second[1]]
        return out


def validate_name(P: Poset, x: PName) -> NameViolation | None:
    """First hereditary violation of the incompatibility requirement, if any."""
    seen: set = set()
    stack: list[tuple[PName, tuple]] = [(x, ())]
    while stack:
        y, path = stack.pop()
        if y in seen:
            continue
        seen.add(y)
        for pair in y.sorted_entries:
            if pair[1] not in P:
                return NameViolation(path, y, pair, None, "unknown-condition")
        for a, p in y.urelement_entries:
            for other in y.sorted_entries:
                if other[0] != a and P.compatible(p, other[1]):
                    return NameViolation(path, y, (a, p), other, "compatible-entries")
        for e, c in reversed(y.name_entries):
            stack.append((e, path + (c,)))
    return None


def is_valid_name(P: Poset, x: PName) -> bool:
    return validate_name(P, x) is None


def require_valid(P: Poset, x: PName) -> PName:
    violation = validate_name(P, x)
    if violation is not None:
        raise InvalidName(f"{violation.reason} in {violation.name!r}: {violation.first} vs {violation.second}")
    return x


def check_name(P: Poset, v: HfuValue) -> PName:
    return _check(P.top, v)


@lru_cache(maxsize=None)
def _check(top: str, v: HfuValue) -> PName:
    if isinstance(v, Urelement):
        return pname((v, top))
    return PName(frozenset((_check(top, y), top) for y in v.members))


@lru_cache(maxsize=None)
def _valuate(x: PName, G: frozenset) -> HfuValue:
    fired = {a for a, p in x.urelement_entries if p in G}
    if len(fired) > 1:
        raise MalformedValuation(f"urelements {sorted(a.id for a in fired)} fire together in {x!r}")
    if fired:
        return next(iter(fired))
    return make_set(_valuate(y, G) for y, p in x.name_entries if p in G)


def valuate(x: PName, G: Iterable[str]) -> HfuValue:
    """The object ``x`` names under ``G``.

    Refuses, rather than picking one, if two different urelement entries fire.
    """
    return _valuate(x, frozenset(G))


@lru_cache(maxsize=None)
def _legacy_valuate(t, G: frozenset) -> HfuValue:
    if isinstance(t, Urelement):
        return t
    return make_set(_legacy_valuate(s, G) for s, p in t.entries if p in G)


def legacy_valuate(t: LegacyName, G: Iterable[str]) -> HfuValue:
    return _legacy_valuate(t, frozenset(G))


def mix(P: Poset, f: Mapping[str, PName]) -> PName:
    """A single name agreeing with ``f[p]`` below each ``p`` of an antichain."""
    if not P.is_antichain(f):
        raise NotAntichain(f"mixture domain {sorted(f)} is not an antichain")
    out = set()
    for p, name in f.items():
        for y, q in name.entries:
            for r in P.below[p] & P.below[q]:
                out.add((y, r))
    return PName(frozenset(out))


def purify(x: PName, A: Iterable[Urelement]) -> PName:
    """Hereditarily drop urelement entries outside ``A``."""
    return _purify(x, frozenset(A))


@lru_cache(maxsize=None)
def _purify(x: PName, A: frozenset) -> PName:
    out = set()
    for y, p in x.entries:
        if isinstance(y, PName):
            out.add((_purify(y, A), p))
        elif y in A:
            out.add((y, p))
    return PName(frozenset(out))


def set_counterpart(P: Poset, x: PName) -> PName:
    """A name that valuates like ``x`` whenever ``x`` valuates to a set.

    Two kinds of entries, both ranging over every condition ``s`` of ``P``:
    ``(y^Set, s)`` for a name entry ``(y, p)`` with ``s <= p`` and ``s``
    incompatible with all urelement conditions inside ``y``; and
    ``(check(a), s)`` whenever ``(y, p)`` is an entry, ``(a, r)`` is a
    urelement entry of ``y`` and ``s <= p, r``.  Top-level urelement entries of
    ``x`` are forgotten.
    """
    return _set_counterpart(P, x)


@lru_cache(maxsize=None)
def _set_counterpart(P: Poset, x: PName) -> PName:
    out = set()
    for y, p in x.name_entries:
        ur_conds = [r for _, r in y.urelement_entries]
        y_set = None
        for s in P.below[p]:
            if all(P.incompatible(s, r) for r in ur_conds):
                if y_set is None:
                    y_set = _set_counterpart(P, y)
                out.add((y_set, s))
        for a, r in y.urelement_entries:
            a_check = check_name(P, a)
            for s in P.below[p] & P.below[r]:
                out.add((a_check, s))
    return PName(frozenset(out))


def embed_j(P: Poset, t: LegacyName) -> PName:
    return _embed_j(P.top, t)


@lru_cache(maxsize=None)
def _embed_j(top: str, t) -> PName:
    if isinstance(t, Urelement):
        return pname((t, top))
    return PName(frozenset((_embed_j(top, s), p) for s, p in t.entries))


def j_preimage(P: Poset, x: PName) -> LegacyName | None:
    """The legacy name ``s`` with ``embed_j(P, s) == x``, or ``None``."""
    if x.urelement_entries:
        if len(x.entries) == 1 and x.urelement_entries[0][1] == P.top:
            return x.urelement_entries[0][0]
        return None
    out = []
    for y, p in x.name_entries:
        s = j_preimage(P, y)
        if s is None:
            return None
        out.append((s, p))
    return LName(frozenset(out))


def act(pi: Automorphism, x: PName) -> PName:
    """Automorphism action: urelement entries move, conditions stay put."""
    if not pi.mapping or not (x.kernel & pi.support):
        return x
    out = set()
    for y, p in x.entries:
        out.add((pi.map_urelement(y) if isinstance(y, Urelement) else act(pi, y), p))
    return PName(frozenset(out))


def gamma_name(P: Poset) -> PName:
    """``{(check(p), p) : p in P}``, conditions coded by :meth:`Poset.condition_value`."""
    return PName(frozenset((check_name(P, P.condition_value(p)), p) for p in P.elements))


class NamePool:
    """A finite, subname-closed stock of names standing in for the ground model's names."""

    def __init__(self, poset: Poset, names: Iterable[PName]):
        self.poset = poset
        self.names = frozenset(names)
        for x in self.names:
            require_valid(poset, x)
            for e, _ in x.name_entries:
                if e not in self.names:
                    raise PoolError(f"subname {e!r} of {x!r} missing from pool")

    def __contains__(self, x: object) -> bool:
        return x in self.names

    def __iter__(self) -> Iterator[PName]:
        return iter(self.sorted_names)

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NamePool):
            return NotImplemented
        return self.poset == other.poset and self.names == other.names

    def __hash__(self) -> int:
        return hash((self.poset, self.names))

    def __repr__(self) -> str:
        return f"NamePool({len(self.names)} names over {self.poset!r})"

    @cached_property
    def sorted_names(self) -> tuple:
        return tuple(sort_names(self.names))

    @cached_property
    def kernel(self) -> frozenset:
        out: set = set()
        for x in self.names:
            out |= x.kernel
        return frozenset(out)

    def extended(self, extra: Iterable[PName]) -> NamePool:
        return close_pool(self.poset, set(self.names) | set(extra), include_checks=False)


def close_pool(
    P: Poset,
    seeds: Iterable[PName],
    include_checks: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> NamePool:
    """Smallest subname-closed pool holding ``seeds``.

    With ``include_checks`` the check-name of every mentioned urelement is
    added as well.
    """
    names: set = set()
    for x in seeds:
        require_valid(P, x)
        names.add(x)
        names |= x.subnames()
        if len(names) > budget:
            raise BudgetExceeded(f"pool exceeds budget {budget}")
    if include_checks:
        urs = set()
        for x in names:
            urs |= x.kernel
        names |= {check_name(P, a) for a in urs}
    return NamePool(P, names)


class LegacyPool:
    """Subname-closed stock of legacy names; urelements are names here."""

    def __init__(self, poset: Poset, names: Iterable[LegacyName]):
        self.poset = poset
        self.names = frozenset(names)
        for t in self.names:
            if isinstance(t, LName):
                for s, p in t.entries:
                    if p not in poset:
                        raise InvalidName(f"unknown condition {p!r} in {t!r}")
                    if s not in self.names:
                        raise PoolError(f"subname {s!r} of {t!r} missing from pool")

    def __contains__(self, t: object) -> bool:
        return t in self.names

    def __iter__(self) -> Iterator[LegacyName]:
        return iter(self.sorted_names)

    def __len__(self) -> int:
        return len(self.names)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LegacyPool):
            return NotImplemented
        return self.poset == other.poset and self.names == other.names

    def __hash__(self) -> int:
        return hash((self.poset, self.names))

    @cached_property
    def sorted_names(self) -> tuple:
        return tuple(sort_names(self.names))


def close_legacy_pool(P: Poset, seeds: Iterable[LegacyName], include_urelements: bool = True) -> LegacyPool:
    names: set = set()
    for t in seeds:
        names.add(t)
        if isinstance(t, LName):
            names |= t.subnames()
    if include_urelements:
        for t in list(names):
            names |= t.kernel if isinstance(t, LName) else {t}
    return LegacyPool(P, names)


def legacy_pool_for(pool: NamePool) -> LegacyPool:
    """The legacy pool whose names map under ``embed_j`` onto the set-counterparts of ``pool``."""
    P = pool.poset
    seeds: list = list(pool.kernel)
    for x in pool:
        s = j_preimage(P, set_counterpart(P, x))
        if s is None:
            raise InvalidName(f"set-counterpart of {x!r} is outside the range of j")
        seeds.append(s)
    return close_legacy_pool(P, seeds)


def values_of(pool: NamePool, G: Iterable[str]) -> frozenset:
    G = frozenset(G)
    return frozenset(_valuate(x, G) for x in pool.names)


def legacy_values_of(pool: LegacyPool, G: Iterable[str]) -> frozenset:
    G = frozenset(G)
    return frozenset(_legacy_valuate(t, G) for t in pool.names)


def members_of(v: HfuValue) -> frozenset:
    """Members of ``v``; a urelement has none."""
    return v.members if isinstance(v, HSet) else frozenset()
