import itertools

import pytest
from hypothesis import given, settings, strategies as st

from urforcing.axioms import (
    AxiomLabError,
    Ideal,
    NoSwapAvailable,
    Ultrafilter,
    diagram_json,
    duplicate_of,
    hierarchy_edges,
    hierarchy_ellipses,
    homogeneity_automorphism,
    ideal_swap,
    ideal_violation,
    internal_ultrapower,
    is_a_ideal,
    is_tail,
    swap_conditions,
    tail_of,
    to_dot,
)
from urforcing.formula import AEq, And, Eq, In, IsUr, Not, Sub, Var
from urforcing.forcing import generate_formulas
from urforcing.hfu import EMPTY, Automorphism, hset, ur
from urforcing.suites import LOS_PALETTE, golden_edges, ideal_oracle

a, b, c, d = (ur(s) for s in "abcd")
ABC = frozenset({a, b, c})


def fam(*sets):
    return frozenset(frozenset(s) for s in sets)


def test_ideal_examples():
    small = Ideal(ABC, fam([], [a], [b], [c]))
    ok, v = is_a_ideal(small)
    assert not ok and v["condition"] == "union-closed"
    proper = Ideal(frozenset({a, b}), fam([], [a], [b]))
    assert ideal_violation(proper)["condition"] == "union-closed"
    assert ideal_violation(Ideal(ABC, fam([], [a], [b], [a, b])))["condition"] == "singletons"
    assert ideal_violation(Ideal(ABC, fam(ABC)))["condition"] == "full-pool-excluded"
    assert ideal_violation(Ideal(ABC, fam([a, b])))["condition"] == "subset-closed"


def test_no_ideal_on_nonempty_finite_pool():
    for n in range(1, 4):
        assert not any(ideal_oracle(n, m) for m in range(1 << (1 << n)))
    assert is_a_ideal(Ideal(frozenset(), frozenset()))[0]


def test_swap_examples():
    I = Ideal(ABC, fam([], [a], [b], [c]))
    pi = ideal_swap(a, {a}, I)
    assert pi == Automorphism.swap(ABC, a, b)
    assert all(swap_conditions(pi, a, frozenset({a}), I).values())
    with pytest.raises(NoSwapAvailable):
        ideal_swap(a, ABC, Ideal(ABC, fam(ABC)))
    with pytest.raises(AxiomLabError):
        ideal_swap(b, {a}, I)


def test_swap_skips_bad_partners():
    # swapping a with b would break {b, c}; c is the only admissible partner
    I = Ideal(frozenset({a, b, c, d}), fam([], [a], [b], [c], [d], [b, d]))
    pi = ideal_swap(a, {a}, I)
    assert pi(a) == c


def test_homogeneity_examples():
    assert homogeneity_automorphism({a}, {b}, {c}) == Automorphism.swap({a, b, c}, b, c)
    pi = homogeneity_automorphism({a}, {b, c}, {b, c})
    assert pi.mapping == {}
    assert homogeneity_automorphism({a}, {b}, {b, c}) is None
    with pytest.raises(AxiomLabError):
        homogeneity_automorphism({a}, {a}, {b})


urs = [ur(s) for s in "abcdef"]


@settings(max_examples=100)
@given(st.data())
def test_homogeneity_properties(data):
    pool = frozenset(urs)
    A = data.draw(st.frozensets(st.sampled_from(urs), max_size=2))
    rest = sorted(pool - A, key=lambda u: u.id)
    B = data.draw(st.frozensets(st.sampled_from(rest), max_size=3)) if rest else frozenset()
    C = data.draw(st.frozensets(st.sampled_from(rest), min_size=len(B), max_size=len(B))) if rest else frozenset()
    pi = homogeneity_automorphism(A, B, C, pool)
    if len(B) != len(C):
        assert pi is None
        return
    assert pi.image(B) == C
    assert pi.fixes_pointwise(A)
    twice = pi.compose(pi)
    assert twice.image(B | C) == B | C and twice.fixes_pointwise(A)


def test_duplicates_and_tails():
    pool = {a, b, c, d}
    assert duplicate_of(pool, {a, b}) == {c, d}
    assert tail_of(pool, {a, b}) == {c, d}
    assert duplicate_of(pool, pool) is None
    assert tail_of(pool, pool) == frozenset()
    assert duplicate_of(pool, set()) == frozenset()
    assert tail_of(pool, set()) == pool


def test_tail_is_the_only_tail():
    pool = frozenset(urs[:4])
    for k in range(5):
        for A in itertools.combinations(sorted(pool, key=lambda u: u.id), k):
            A = frozenset(A)
            t = tail_of(pool, A)
            assert is_tail(pool, A, t)
            rest = sorted(pool - A, key=lambda u: u.id)
            tails = [frozenset(B) for j in range(len(rest) + 1) for B in itertools.combinations(rest, j) if is_tail(pool, A, frozenset(B))]
            assert tails == [t]


def test_ultrapower_examples():
    F = Ultrafilter(("i", "j", "k"), "j")
    fs = {"f": {"i": a, "j": EMPTY, "k": b}, "g": {"i": EMPTY, "j": hset(EMPTY), "k": a}}
    f, g = Var("f"), Var("g")
    assert internal_ultrapower(fs, F, In(f, g)) == (True, True)
    assert internal_ultrapower(fs, F, IsUr(f)) == (False, False)
    assert internal_ultrapower(fs, F, AEq(f, g)) == (True, True)
    consts = {"f": {i: a for i in F.index}, "g": {i: hset(a) for i in F.index}}
    assert internal_ultrapower(consts, F, In(f, g)) == (True, True)
    assert internal_ultrapower(consts, F, IsUr(f)) == (True, True)
    assert internal_ultrapower(consts, F, Eq(f, g)) == (False, False)


def test_ultrapower_rejects_subset_and_bad_input():
    F = Ultrafilter(("i",), "i")
    fs = {"f": {"i": a}}
    with pytest.raises(ValueError):
        internal_ultrapower(fs, F, Sub(Var("f"), Var("f")))
    with pytest.raises(AxiomLabError):
        Ultrafilter(("i",), "z")
    with pytest.raises(AxiomLabError):
        internal_ultrapower({"f": {}}, F, IsUr(Var("f")))


@settings(max_examples=80)
@given(st.integers(1, 4), st.data())
def test_los_random(n, data):
    index = tuple(f"i{k}" for k in range(n))
    F = Ultrafilter(index, data.draw(st.sampled_from(index)))
    fs = {l: {i: data.draw(st.sampled_from(LOS_PALETTE)) for i in index} for l in "fgh"}
    for phi in generate_formulas([Var(l) for l in "fgh"], 1, 0, kinds=("in", "eq", "aeq"), max_conjunctions=20):
        left, right = internal_ultrapower(fs, F, phi)
        assert left == right


def test_diagram_edges():
    edges = {(e.source, e.target) for e in hierarchy_edges()}
    assert len(hierarchy_edges()) == 14
    assert ("Tail", "Collection") in edges
    assert ("Collection", "RP") in edges
    assert ("RP-", "Collection") in edges
    assert edges == golden_edges()
    assert all(e.citation for e in hierarchy_edges())
    assert ("DC_<Ord", "DC_kappa-scheme") in hierarchy_ellipses()


def test_diagram_exports():
    data = diagram_json()
    assert len(data["edges"]) == 14
    dot = to_dot()
    assert dot.startswith("digraph") and dot.count("->") == 16
