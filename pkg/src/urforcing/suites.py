"""Exhaustive and sampled verification suites over built-in instance families.

Every suite returns a :class:`~urforcing.forcing.Report`; a suite passes when
it records no counterexamples.  Sampling is driven by seeded
:class:`random.Random` instances, so reports are reproducible.
"""
from __future__ import annotations

import itertools
import random
from typing import Callable, Iterable, Sequence

from .axioms import (
    Ideal,
    NoSwapAvailable,
    Ultrafilter,
    hierarchy_edges,
    ideal_swap,
    ideal_violation,
    internal_ultrapower,
)
from .errors import UrforcingError
from .formula import Const, Exists, In, Var
from .forcing import (
    Report,
    build_extension,
    check_forcing_theorem,
    find_witness,
    forces_semantic,
    generate_formulas,
    legacy_find_witness,
)
from .hfu import EMPTY, Urelement, hset, kernel, ur
from .jsonio import formula_to_json, pname_to_json
from .names import (
    EMPTY_NAME,
    LName,
    NamePool,
    PName,
    close_legacy_pool,
    close_pool,
    embed_j,
    gamma_name,
    is_valid_name,
    j_preimage,
    legacy_pool_for,
    legacy_valuate,
    legacy_values_of,
    lname,
    members_of,
    mix,
    pname,
    purify,
    set_counterpart,
    valuate,
    values_of,
)
from .poset import P2, Poset, all_filters, chain, dense_subsets, enumerate_posets, flat, fn_poset, meets_every_dense_set

URELEMENTS = (ur("a"), ur("b"), ur("c"))


def catalog() -> dict[str, Poset]:
    """Ten posets with at most four conditions."""
    return {
        "point": chain(1),
        "chain2": chain(2),
        "P2": P2,
        "fn-x": fn_poset(["x"]),
        "chain3": chain(3),
        "flat3": flat(3),
        "chain4": chain(4),
        "split-tail": Poset(["1", "p", "q", "r"], [("p", "1"), ("q", "1"), ("r", "q")], "1"),
        "diamond": Poset(["1", "p", "q", "r"], [("p", "1"), ("q", "1"), ("r", "p"), ("r", "q")], "1"),
        "fork": Poset(["1", "c", "p", "q"], [("c", "1"), ("p", "c"), ("q", "c")], "1"),
    }


# random names ---------------------------------------------------------------


def random_name(
    P: Poset,
    rng: random.Random,
    rank: int = 2,
    urelements: Sequence[Urelement] = URELEMENTS,
    max_entries: int = 3,
) -> PName:
    """A valid name of rank at most ``rank``.

    Entries are drawn at random and kept only if they respect the
    incompatibility requirement against those already kept.
    """
    if rank <= 0:
        return EMPTY_NAME
    kept: list = []
    for _ in range(rng.randint(0, max_entries)):
        cond = rng.choice(P.elements)
        if urelements and rng.random() < 0.45:
            entry = rng.choice(list(urelements))
        else:
            entry = random_name(P, rng, rng.randint(0, rank - 1), urelements, max_entries)
        if _fits(P, kept, (entry, cond)):
            kept.append((entry, cond))
    return PName(frozenset(kept))


def _fits(P: Poset, kept: list, new: tuple) -> bool:
    e, c = new
    for f, d in kept:
        clash = (isinstance(e, Urelement) and f != e) or (isinstance(f, Urelement) and f != e)
        if clash and P.compatible(c, d):
            return False
    return True


def random_legacy_name(P: Poset, rng: random.Random, rank: int = 2, urelements=URELEMENTS, max_entries: int = 3):
    if rank <= 0 or rng.random() < 0.2:
        return rng.choice(list(urelements)) if urelements and rng.random() < 0.5 else LName(frozenset())
    entries = []
    for _ in range(rng.randint(0, max_entries)):
        entries.append((random_legacy_name(P, rng, rank - 1, urelements, max_entries), rng.choice(P.elements)))
    return LName(frozenset(entries))


def random_antichain(P: Poset, rng: random.Random) -> list[str]:
    maximal = P.maximal_antichains()
    chosen = sorted(rng.choice(maximal))
    k = rng.randint(1, len(chosen))
    return sorted(rng.sample(chosen, k))


def pool_family(P: Poset, seed: int = 0, count: int = 6, max_seeds: int = 3) -> list[tuple[list[PName], NamePool]]:
    """Seeded pools: ``(seed names, subname-closed pool with check-names)``."""
    rng = random.Random(f"pools:{seed}:{P.elements}:{sorted(P.leq_pairs)}")
    out = []
    for i in range(count):
        n_urs = 1 + i % 3
        urs = URELEMENTS[:n_urs]
        seeds = [random_name(P, rng, rng.randint(1, 2), urs) for _ in range(1 + i % max_seeds)]
        out.append((seeds, close_pool(P, seeds)))
    return out


def _standard_pools(P: Poset) -> list[tuple[list[PName], NamePool]]:
    a, b = URELEMENTS[:2]
    out = [([pname((a, P.top))], close_pool(P, [pname((a, P.top))]))]
    if len(P.atoms) >= 2:
        p, q = sorted(P.atoms)[:2]
        x = pname((a, p), (b, q))
        out.append(([x], close_pool(P, [x])))
        y = pname((pname((a, P.top)), p), (pname((b, P.top)), q))
        out.append(([y, x], close_pool(P, [y, x])))
    return out


# suites -------------------------------------------------------------------


def suite_forcing_theorem(
    depth: int = 2,
    max_quantifiers: int = 2,
    pools_per_poset: int = 30,
    extra: Iterable[tuple[list, NamePool]] = (),
    seed: int = 0,
) -> Report:
    report = Report("forcing-theorem")
    jobs = []
    for P in catalog().values():
        jobs.extend(_standard_pools(P))
        jobs.extend(pool_family(P, seed, pools_per_poset))
    jobs.extend(extra)
    for seeds, pool in jobs:
        terms = [Const(x) for x in seeds[:3]]
        formulas = generate_formulas(terms, depth, max_quantifiers, seed=seed)
        check_forcing_theorem(pool, formulas, report)
        report.merge(_aeq_literal(pool, terms))
    return report


def _aeq_literal(pool: NamePool, terms: list) -> Report:
    """Semantic A-equality means "same urelement or both sets" in every generic."""
    from .formula import AEq

    report = Report("aeq")
    P = pool.poset
    for s, t in itertools.product(terms, repeat=2):
        for p in P.elements:
            if not forces_semantic(pool, p, AEq(s, t)):
                continue
            for G in P.generic_filters():
                if p not in G:
                    continue
                report.checked += 1
                v, w = valuate(s.name, G), valuate(t.name, G)
                ok = (isinstance(v, Urelement) and v == w) or (not isinstance(v, Urelement) and not isinstance(w, Urelement))
                if not ok:
                    report.fail({"check": "aeq-literal", "condition": p, "generic": sorted(G)})
    return report


def suite_mixtures(samples: int = 600, seed: int = 0) -> Report:
    report = Report("mixtures")
    rng = random.Random(f"mixtures:{seed}")
    posets = list(catalog().values())
    for i in range(samples):
        P = posets[i % len(posets)]
        X = random_antichain(P, rng)
        f = {p: random_name(P, rng, rng.randint(0, 2)) for p in X}
        v = mix(P, f)
        report.checked += 1
        if not is_valid_name(P, v):
            report.fail({"check": "mix-valid", "sample": i, "mix": pname_to_json(v)})
            continue
        for p in X:
            for G in P.generic_filters():
                if p not in G:
                    continue
                report.checked += 1
                if valuate(v, G) != valuate(f[p], G):
                    report.fail({"check": "mix-agrees", "sample": i, "condition": p, "generic": sorted(G)})
    return report


def _name_corpus(P: Poset, rng: random.Random, count: int) -> list[PName]:
    names = {EMPTY_NAME}
    for _, pool in _standard_pools(P) + pool_family(P, 1, 4):
        names |= pool.names
    for _ in range(20 * count):
        if len(names) >= count:
            break
        names.add(random_name(P, rng, rng.randint(0, 2)))
    return sorted(names, key=lambda x: x.key)


def _subsets(items: Sequence) -> list[frozenset]:
    return [frozenset(c) for k in range(len(items) + 1) for c in itertools.combinations(items, k)]


def suite_kernel(names_per_poset: int = 40, seed: int = 0) -> Report:
    report = Report("kernel")
    rng = random.Random(f"kernel:{seed}")
    for label, P in catalog().items():
        names = _name_corpus(P, rng, names_per_poset)
        for x in names:
            for G in P.generic_filters():
                report.checked += 1
                if not kernel(valuate(x, G)) <= x.kernel:
                    report.fail({"check": "valuation-kernel", "poset": label, "name": pname_to_json(x), "generic": sorted(G)})
            for A in _subsets(URELEMENTS):
                y = purify(x, A)
                report.checked += 1
                if not (y.kernel <= A and is_valid_name(P, y)):
                    report.fail({"check": "purify", "poset": label, "name": pname_to_json(x), "A": sorted(a.id for a in A)})
            report.checked += 1
            if not is_valid_name(P, set_counterpart(P, x)):
                report.fail({"check": "set-counterpart-valid", "poset": label, "name": pname_to_json(x)})
        for _ in range(20):
            X = random_antichain(P, rng)
            v = mix(P, {p: rng.choice(names) for p in X})
            report.checked += 1
            if not is_valid_name(P, v):
                report.fail({"check": "mix-valid", "poset": label, "mix": pname_to_json(v)})
        for _ in range(20):
            t = random_legacy_name(P, rng)
            report.checked += 1
            if not is_valid_name(P, embed_j(P, t)):
                report.fail({"check": "j-valid", "poset": label})
        for _, pool in _standard_pools(P) + pool_family(P, 2, 3):
            pool = pool.extended([gamma_name(P)])
            pool = close_pool(P, pool.names)
            for G in P.generic_filters():
                _, checks = build_extension(pool, G)
                report.checked += 1
                if not all(v is not False for v in checks.values()) or checks["generic_included"] is not True:
                    report.fail({"check": "extension", "poset": label, "generic": sorted(G), "report": checks})
    return report


def _legacy_corpus(P: Poset, rng: random.Random, count: int) -> list:
    names = {LName(frozenset()), *URELEMENTS}
    for _ in range(20 * count):
        if len(names) >= count:
            break
        names.add(random_legacy_name(P, rng))
    return sorted(names, key=lambda t: t.key)


def suite_appendix(seed: int = 0) -> Report:
    report = Report("appendix")
    rng = random.Random(f"appendix:{seed}")
    for label, P in catalog().items():
        generics = P.generic_filters()
        legacy = _legacy_corpus(P, rng, 25)
        # j is faithful and preserves values
        for G in generics:
            for s, t in itertools.product(legacy, repeat=2):
                report.checked += 1
                same = legacy_valuate(s, G) == legacy_valuate(t, G)
                if same != (valuate(embed_j(P, s), G) == valuate(embed_j(P, t), G)):
                    report.fail({"check": "j-faithful", "poset": label, "generic": sorted(G)})
            for s in legacy:
                report.checked += 1
                if valuate(embed_j(P, s), G) != legacy_valuate(s, G):
                    report.fail({"check": "j-value", "poset": label, "generic": sorted(G)})
        for x in _name_corpus(P, rng, 30):
            xs = set_counterpart(P, x)
            sigma = j_preimage(P, xs)
            report.checked += 1
            if sigma is None or embed_j(P, sigma) != xs:
                report.fail({"check": "set-counterpart-in-range", "poset": label, "name": pname_to_json(x)})
            for G in generics:
                report.checked += 1
                if members_of(valuate(xs, G)) != members_of(valuate(x, G)):
                    report.fail({"check": "set-counterpart-members", "poset": label, "name": pname_to_json(x), "generic": sorted(G)})
                if not isinstance(valuate(x, G), Urelement) and valuate(xs, G) != valuate(x, G):
                    report.fail({"check": "set-counterpart-value", "poset": label, "name": pname_to_json(x), "generic": sorted(G)})
        # the two extensions coincide, pairing pools in both directions
        pairs = []
        for _, pool in _standard_pools(P) + pool_family(P, 3, 4):
            pool = close_pool(P, pool.names | {EMPTY_NAME})
            pairs.append((pool, legacy_pool_for(pool)))
        for _ in range(4):
            lpool = close_legacy_pool(P, [random_legacy_name(P, rng) for _ in range(2)] + [LName(frozenset())])
            pairs.append((close_pool(P, [embed_j(P, t) for t in lpool.names]), lpool))
        for pool, lpool in pairs:
            for G in generics:
                report.checked += 1
                if values_of(pool, G) != legacy_values_of(lpool, G):
                    report.fail({"check": "same-extension", "poset": label, "generic": sorted(G)})
    return report


def legacy_fullness_instance() -> dict:
    """The two-atom scenario: a legacy name that is ``a`` or ``b`` as a member."""
    a, b = URELEMENTS[:2]
    x_legacy = lname((a, "p"), (b, "q"))
    x_new = embed_j(P2, x_legacy)
    return {"legacy": x_legacy, "new": x_new, "a": a, "b": b}


def legacy_names_rank1(P: Poset, urelements: Sequence[Urelement]) -> list:
    """Every legacy name of rank at most one over ``urelements`` (urelements included)."""
    entries = [(a, p) for a in urelements for p in P.elements]
    names = [LName(frozenset(c)) for c in _subsets(entries)]
    return list(urelements) + names


def suite_legacy_fullness() -> Report:
    report = Report("legacy-fullness")
    inst = legacy_fullness_instance()
    x_l, x_n = inst["legacy"], inst["new"]
    phi_l = Exists("y", In(Var("y"), Const(x_l)))
    lpool = close_legacy_pool(P2, [x_l])

    report.checked += 1
    if not forces_semantic(lpool, "1", phi_l):
        report.fail({"check": "legacy-existential-forced"})
    candidates = legacy_names_rank1(P2, [inst["a"], inst["b"]])
    report.checked += len(lpool) + len(candidates)
    w = legacy_find_witness(lpool, "1", phi_l, candidates)
    if w is not None:
        report.fail({"check": "legacy-no-witness", "found": repr(w)})

    # a witness exists once the antichain has a single member
    single = lname((inst["a"], "1"))
    single_pool = close_legacy_pool(P2, [single])
    report.checked += 1
    if legacy_find_witness(single_pool, "1", Exists("y", In(Var("y"), Const(single)))) != inst["a"]:
        report.fail({"check": "legacy-singleton-witness"})

    pool = close_pool(P2, [x_n])
    phi_n = Exists("y", In(Var("y"), Const(x_n)))
    report.checked += 1
    v = find_witness(pool, "1", phi_n)
    expected = mix(P2, {"p": pname((inst["a"], "1")), "q": pname((inst["b"], "1"))})
    if v is None or v != expected:
        report.fail({"check": "new-witness", "found": None if v is None else pname_to_json(v)})
    else:
        report.checked += 1
        if not forces_semantic(pool.extended([v]), "1", In(Const(v), Const(x_n))):
            report.fail({"check": "new-witness-forced"})
    return report


# quantifier-free formulas over function symbols
LOS_PALETTE = (
    ur("a"),
    ur("b"),
    EMPTY,
    hset(ur("a")),
    hset(EMPTY),
    hset(ur("a"), hset(ur("a"))),
)


def suite_los(families: int = 25, seed: int = 0, depth: int = 2) -> Report:
    report = Report("los")
    rng = random.Random(f"los:{seed}")
    labels = ["f", "g", "h"]
    formulas = generate_formulas(
        [Var(l) for l in labels], depth, 0, kinds=("in", "eq", "aeq"), unary=True, seed=seed
    )
    for size in range(1, 5):
        index = tuple(f"i{k}" for k in range(size))
        for gen in index:
            F = Ultrafilter(index, gen)
            for n in range(families):
                if n == 0:
                    # constants: each [c_v] should behave as v
                    vals = rng.sample(LOS_PALETTE, 3)
                    fs = {l: {i: v for i in index} for l, v in zip(labels, vals)}
                else:
                    fs = {l: {i: rng.choice(LOS_PALETTE) for i in index} for l in labels}
                for phi in formulas:
                    left, right = internal_ultrapower(fs, F, phi)
                    report.checked += 1
                    if left != right:
                        report.fail({"check": "los", "index": list(index), "generator": gen, "formula": formula_to_json(phi)})
    return report


def ideal_oracle(n: int, family_mask: int) -> bool:
    """The four closure conditions on bitmask-coded subsets of an ``n``-point pool."""
    full = (1 << n) - 1
    members = [s for s in range(1 << n) if family_mask >> s & 1]
    if family_mask >> full & 1:
        return False
    for s in members:
        for t in members:
            if not family_mask >> (s | t) & 1:
                return False
        for t in range(1 << n):
            if t & ~s == 0 and not family_mask >> t & 1:
                return False
    return all(family_mask >> (1 << k) & 1 for k in range(n))


def _swap_oracle(n: int, family_mask: int, a: int, b: int) -> bool:
    """Does transposing points ``a`` and ``b`` map the family onto itself?"""
    def move(s: int) -> int:
        bit_a, bit_b = s >> a & 1, s >> b & 1
        s &= ~((1 << a) | (1 << b))
        return s | (bit_a << b) | (bit_b << a)

    return all((family_mask >> move(s) & 1) == (family_mask >> s & 1) for s in range(1 << n))


def suite_ideals(max_pool: int = 3) -> Report:
    report = Report("ideals")
    for n in range(max_pool + 1):
        points = URELEMENTS[:n]
        subsets = [frozenset(points[k] for k in range(n) if s >> k & 1) for s in range(1 << n)]
        for mask in range(1 << (1 << n)):
            family = frozenset(subsets[s] for s in range(1 << n) if mask >> s & 1)
            I = Ideal(frozenset(points), family)
            report.checked += 1
            if (ideal_violation(I) is None) != ideal_oracle(n, mask):
                report.fail({"check": "ideal-oracle", "pool": n, "mask": mask})
            for s in range(1 << n):
                if not mask >> s & 1:
                    continue
                A = subsets[s]
                for k in range(n):
                    if not s >> k & 1:
                        continue
                    report.checked += 1
                    expected = [m for m in range(n) if not s >> m & 1 and _swap_oracle(n, mask, k, m)]
                    try:
                        pi = ideal_swap(points[k], A, I)
                    except NoSwapAvailable:
                        if expected:
                            report.fail({"check": "swap-missed", "pool": n, "mask": mask, "A": s, "a": k})
                        continue
                    moved = [m for m in range(n) if pi(points[m]) != points[m]]
                    other = [m for m in moved if m != k]
                    ok = (
                        len(moved) == 2
                        and k in moved
                        and other[0] in expected
                        and all(pi(points[m]) == points[m] for m in range(n) if s >> m & 1 and m != k)
                    )
                    if not ok:
                        report.fail({"check": "swap-conditions", "pool": n, "mask": mask, "A": s, "a": k})
    return report


def suite_genericity(max_size: int = 5) -> Report:
    report = Report("genericity")
    for n in range(1, max_size + 1):
        for P in enumerate_posets(n):
            dense = dense_subsets(P)
            meeting = {F for F in all_filters(P) if meets_every_dense_set(P, F, dense)}
            atom_filters = set(P.generic_filters())
            report.checked += 1
            if meeting != atom_filters:
                report.fail({
                    "check": "generic-filters",
                    "poset": P.to_json(),
                    "meeting": sorted(sorted(F) for F in meeting),
                    "atoms": sorted(sorted(F) for F in atom_filters),
                })
    return report


# independent transcription of the implication diagram, one arrow per line
DIAGRAM_GOLDEN = """
A is a set -> Tail
A is a set -> DC_<Ord
Plenitude -> Closure&Duplication
Plenitude -> DC_<Ord
Tail -> Collection
Closure&Duplication -> Collection
Closure&Duplication -> Duplication
DC_<Ord -> Collection
DC_omega1-scheme -> DC_omega-scheme
Collection -> DC_omega-scheme
Collection -> Closure
Collection -> RP
RP -> RP-
RP- -> Collection
"""


def golden_edges() -> set[tuple[str, str]]:
    return {tuple(s.strip() for s in line.split("->")) for line in DIAGRAM_GOLDEN.strip().splitlines()}


def suite_diagram() -> Report:
    report = Report("diagram")
    edges = [(e.source, e.target) for e in hierarchy_edges()]
    report.checked += 1
    if len(edges) != len(set(edges)) or set(edges) != golden_edges():
        report.fail({
            "check": "diagram",
            "missing": sorted(map(list, golden_edges() - set(edges))),
            "extra": sorted(map(list, set(edges) - golden_edges())),
        })
    return report


SUITES: dict[str, Callable[..., Report]] = {
    "forcing-theorem": suite_forcing_theorem,
    "mixtures": suite_mixtures,
    "kernel": suite_kernel,
    "appendix": suite_appendix,
    "remark33": suite_legacy_fullness,
    "los": suite_los,
    "ideals": suite_ideals,
    "genericity": suite_genericity,
    "diagram": suite_diagram,
}


def run_suite(name: str, **kwargs) -> Report:
    try:
        fn = SUITES[name]
    except KeyError:
        raise UrforcingError(f"unknown suite {name!r}") from None
    report = fn(**kwargs)
    report.name = name
    return report
