import pytest
from hypothesis import given, settings, strategies as st

import oracles
from urforcing.errors import BudgetExceeded
from urforcing.hfu import (
    EMPTY,
    Automorphism,
    HSet,
    Urelement,
    all_permutations,
    build_V,
    hset,
    kernel,
    make_set,
    rank,
    transitive_closure,
    ur,
    von_neumann,
)

a, b, c = ur("a"), ur("b"), ur("c")

# expected sizes computed with oracles.V and frozen here
V_SIZES = {(0, 1): 1, (1, 1): 3, (2, 1): 9, (3, 1): 513, (2, 0): 2, (3, 0): 4, (2, 2): 66}


def to_plain(v):
    if isinstance(v, Urelement):
        return oracles.U(v.id)
    return frozenset(to_plain(m) for m in v.members)


values = st.recursive(
    st.sampled_from([a, b, c, EMPTY]),
    lambda inner: st.frozensets(inner, max_size=3).map(make_set),
    max_leaves=8,
)


def test_make_set_basics():
    assert make_set([]) == EMPTY
    assert make_set([a, a]) == hset(a)
    s = make_set([hset(a), EMPTY])
    assert s == make_set([EMPTY, hset(a)])
    assert s.sorted_members == make_set([EMPTY, hset(a)]).sorted_members
    assert [m.key for m in s.sorted_members] == sorted(m.key for m in s.members)


def test_make_set_rejects_junk():
    with pytest.raises(TypeError):
        make_set([1])


def test_kernel_examples():
    assert kernel(a) == {a}
    assert kernel(EMPTY) == frozenset()
    assert kernel(hset(a, hset(b))) == {a, b}


def test_urelements_have_no_members():
    assert transitive_closure(a) == frozenset()
    assert rank(a) == 0


@pytest.mark.parametrize("alpha,n_urs", sorted(V_SIZES))
def test_build_V_sizes(alpha, n_urs):
    A = [a, b][:n_urs]
    assert len(oracles.V(alpha, [to_plain(x) for x in A])) == V_SIZES[alpha, n_urs]
    assert len(build_V(alpha, A)) == V_SIZES[alpha, n_urs]


def test_build_V_levels():
    assert build_V(0, [a]) == {a}
    assert build_V(1, [a]) == {EMPTY, hset(a), a}


def test_build_V_budget():
    with pytest.raises(BudgetExceeded):
        build_V(4, [a])
    with pytest.raises(BudgetExceeded):
        build_V(3, [a], budget=100)


def test_automorphism_examples():
    swap = Automorphism.swap([a, b], a, b)
    assert swap(hset(a, hset(b))) == hset(b, hset(a))
    assert swap(EMPTY) == EMPTY
    v = hset(a, hset(b, c))
    assert Automorphism.identity([a, b, c])(v) == v


def test_tc_and_rank_examples():
    assert transitive_closure(hset(hset(a))) == {hset(a), a}
    assert rank(hset(EMPTY, hset(EMPTY))) == 2
    assert rank(von_neumann(3)) == 3


@given(values)
def test_matches_oracle(v):
    plain = to_plain(v)
    assert {to_plain(w) for w in transitive_closure(v)} == oracles.tc(plain)
    assert {to_plain(w) for w in kernel(v)} == oracles.kernel(plain)
    assert rank(v) == oracles.rank(plain)


@given(values)
def test_closure_is_transitive(v):
    T = transitive_closure(v)
    assert all(m in T for w in T if isinstance(w, HSet) for m in w.members)


@given(values, values)
def test_extensionality(v, w):
    assert (v == w) == (to_plain(v) == to_plain(w))
    assert (v.key == w.key) == (v == w)


@settings(max_examples=50)
@given(values)
def test_automorphisms_commute_with_kernel(v):
    for pi in all_permutations([a, b, c]):
        assert kernel(pi(v)) == pi.image(kernel(v))
        assert pi.inverse()(pi(v)) == v
        assert rank(pi(v)) == rank(v)


def test_automorphism_must_stay_in_pool():
    from urforcing.hfu import AutomorphismError

    with pytest.raises(AutomorphismError):
        Automorphism([a], {a: b, b: a})
    with pytest.raises(AutomorphismError):
        Automorphism([a, b, c], {a: b})
