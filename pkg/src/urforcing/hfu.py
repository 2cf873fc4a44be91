"""Hereditarily finite sets with urelements.

Values are immutable and hashable.  A set value wraps a ``frozenset`` of
members, so extensional equality is Python equality; the canonical member
order (sorted by serialization string) is used only for output.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Union

from .errors import BudgetExceeded, UrforcingError

DEFAULT_BUDGET = 100_000


@dataclass(frozen=True)
class Urelement:
    id: str

    def __repr__(self) -> str:
        return self.id

    @cached_property
    def key(self) -> str:
        return "@" + json.dumps(self.id)


@dataclass(frozen=True)
class HSet:
    members: frozenset

    def __repr__(self) -> str:
        return "{" + ", ".join(repr(m) for m in self.sorted_members) + "}"

    def __iter__(self) -> Iterator[HfuValue]:
        return iter(self.sorted_members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, item: object) -> bool:
        return item in self.members

    @cached_property
    def sorted_members(self) -> tuple:
        return tuple(sorted(self.members, key=canonical_key))

    @cached_property
    def key(self) -> str:
        return "{" + ",".join(m.key for m in self.sorted_members) + "}"

    @cached_property
    def rank(self) -> int:
        return max((rank(m) + 1 for m in self.members), default=0)

    @cached_property
    def kernel(self) -> frozenset:
        out: set = set()
        for m in self.members:
            out |= kernel(m)
        return frozenset(out)


HfuValue = Union[Urelement, HSet]

EMPTY = HSet(frozenset())


def canonical_key(v: HfuValue) -> str:
    return v.key


def ur(uid: str) -> Urelement:
    return Urelement(uid)


def make_set(members: Iterable[HfuValue]) -> HSet:
    members = frozenset(members)
    for m in members:
        if not isinstance(m, (Urelement, HSet)):
            raise TypeError(f"not an hfu value: {m!r}")
    return HSet(members)


def hset(*members: HfuValue) -> HSet:
    return make_set(members)


def is_urelement(v: object) -> bool:
    return isinstance(v, Urelement)


def kernel(v: HfuValue) -> frozenset:
    """Urelements in the transitive closure of ``{v}``."""
    if isinstance(v, Urelement):
        return frozenset([v])
    return v.kernel


def rank(v: HfuValue) -> int:
    if isinstance(v, Urelement):
        return 0
    return v.rank


def transitive_closure(v: HfuValue) -> frozenset:
    """Least transitive set containing every member of ``v``."""
    out: set = set()
    stack = list(v.members) if isinstance(v, HSet) else []
    while stack:
        m = stack.pop()
        if m in out:
            continue
        out.add(m)
        if isinstance(m, HSet):
            stack.extend(m.members)
    return frozenset(out)


def von_neumann(n: int) -> HSet:
    out = EMPTY
    for _ in range(n):
        out = make_set(out.members | {out})
    return out


def powerset(values: Iterable[HfuValue], budget: int = DEFAULT_BUDGET) -> list[HSet]:
    values = sorted(values, key=canonical_key)
    if len(values) >= 63 or 2 ** len(values) > budget:
        raise BudgetExceeded(f"power set of {len(values)} values exceeds budget {budget}")
    return [
        make_set(combo)
        for size in range(len(values) + 1)
        for combo in itertools.combinations(values, size)
    ]


def build_V(alpha: int, A: Iterable[Urelement], budget: int = DEFAULT_BUDGET) -> frozenset:
    """The stage ``V_alpha(A)``; every successor stage re-adds ``A``."""
    if alpha < 0:
        raise ValueError("alpha must be a natural number")
    A = frozenset(A)
    stage: frozenset = A
    for _ in range(alpha):
        if len(stage) >= 63 or 2 ** len(stage) + len(A) > budget:
            raise BudgetExceeded(
                f"V stage above {len(stage)} values exceeds budget {budget}"
            )
        stage = frozenset(powerset(stage, budget)) | A
    return stage


def sort_values(values: Iterable[HfuValue]) -> list:
    return sorted(values, key=canonical_key)


class AutomorphismError(UrforcingError):
    code = "BAD_AUTOMORPHISM"


class Automorphism:
    """A permutation of a finite urelement pool, identity off its support."""

    def __init__(self, pool: Iterable[Urelement], mapping: Mapping[Urelement, Urelement] | None = None):
        self.pool = frozenset(pool)
        mapping = {k: v for k, v in (mapping or {}).items() if k != v}
        for k, v in mapping.items():
            if k not in self.pool or v not in self.pool:
                raise AutomorphismError(f"{k!r} -> {v!r} leaves the pool")
        if set(mapping) != set(mapping.values()):
            raise AutomorphismError("mapping is not a bijection on its support")
        self.mapping = mapping

    @classmethod
    def identity(cls, pool: Iterable[Urelement]) -> Automorphism:
        return cls(pool)

    @classmethod
    def swap(cls, pool: Iterable[Urelement], a: Urelement, b: Urelement) -> Automorphism:
        return cls(pool, {a: b, b: a})

    @property
    def support(self) -> frozenset:
        return frozenset(self.mapping)

    def __call__(self, v):
        return apply_automorphism(self, v)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Automorphism):
            return NotImplemented
        return self.pool == other.pool and self.mapping == other.mapping

    def __hash__(self) -> int:
        return hash((self.pool, frozenset(self.mapping.items())))

    def __repr__(self) -> str:
        pairs = ", ".join(f"{k!r}->{v!r}" for k, v in sorted(self.mapping.items(), key=lambda kv: kv[0].id))
        return f"Automorphism({pairs})"

    def map_urelement(self, a: Urelement) -> Urelement:
        return self.mapping.get(a, a)

    def image(self, urs: Iterable[Urelement]) -> frozenset:
        return frozenset(self.map_urelement(a) for a in urs)

    def compose(self, other: Automorphism) -> Automorphism:
        """``self`` after ``other``."""
        pool = self.pool | other.pool
        return Automorphism(pool, {a: self.map_urelement(other.map_urelement(a)) for a in pool})

    def inverse(self) -> Automorphism:
        return Automorphism(self.pool, {v: k for k, v in self.mapping.items()})

    def fixes_pointwise(self, urs: Iterable[Urelement]) -> bool:
        return all(self.map_urelement(a) == a for a in urs)


def apply_automorphism(pi: Automorphism, v: HfuValue) -> HfuValue:
    if isinstance(v, Urelement):
        return pi.map_urelement(v)
    if not pi.mapping or not (v.kernel & pi.support):
        return v
    return make_set(apply_automorphism(pi, m) for m in v.members)


def all_permutations(pool: Iterable[Urelement]) -> Iterator[Automorphism]:
    pool = sorted(pool, key=lambda a: a.id)
    for perm in itertools.permutations(pool):
        yield Automorphism(pool, dict(zip(pool, perm)))
