import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from urforcing.hfu import EMPTY, Automorphism, Urelement, hset, kernel, ur
from urforcing.names import (
    EMPTY_NAME,
    InvalidName,
    LName,
    MalformedValuation,
    NamePool,
    PName,
    PoolError,
    act,
    check_name,
    close_pool,
    embed_j,
    gamma_name,
    is_valid_name,
    j_preimage,
    legacy_valuate,
    lname,
    mix,
    pname,
    purify,
    set_counterpart,
    validate_name,
    valuate,
)
from urforcing.poset import P2, NotAntichain, chain
from urforcing.suites import catalog, random_antichain, random_name

a, b, c = ur("a"), ur("b"), ur("c")
a_, b_ = check_name(P2, a), check_name(P2, b)
x = pname((a, "p"), (b, "q"))
P1, Pp, Pq = frozenset({"1", "p"}), frozenset({"1", "p"}), frozenset({"1", "q"})


def plain_name(n):
    if isinstance(n, Urelement):
        return oracles.U(n.id)
    return ("N", frozenset((plain_name(e), p) for e, p in n.entries))


def plain_value(v):
    if isinstance(v, Urelement):
        return oracles.U(v.id)
    return frozenset(plain_value(m) for m in v.members)


def test_validity_examples():
    assert is_valid_name(P2, x)
    bad = validate_name(P2, pname((a, "p"), (b, "p")))
    assert bad.reason == "compatible-entries"
    assert {bad.first, bad.second} == {(a, "p"), (b, "p")}
    assert not is_valid_name(P2, pname((a, "1"), (EMPTY_NAME, "1")))
    assert validate_name(P2, pname((a, "zz"))).reason == "unknown-condition"


def test_validity_is_hereditary():
    inner = pname((a, "1"), (b, "1"))
    v = validate_name(P2, pname((inner, "p")))
    assert v.path == ("p",) and v.name == inner


def test_same_urelement_may_repeat():
    assert is_valid_name(P2, pname((a, "p"), (a, "1")))


def test_check_names():
    assert check_name(P2, a) == pname((a, "1"))
    assert check_name(P2, EMPTY) == EMPTY_NAME
    assert check_name(P2, hset(a)) == pname((pname((a, "1")), "1"))


def test_valuation_examples():
    assert valuate(x, Pp) == a
    assert valuate(x, Pq) == b
    assert valuate(a_, Pq) == a
    assert valuate(pname((a_, "p")), Pq) == EMPTY
    v = hset(a, hset(b, EMPTY))
    for G in P2.generic_filters():
        assert valuate(check_name(P2, v), G) == v


def test_valuation_refuses_ambiguity():
    with pytest.raises(MalformedValuation):
        valuate(pname((a, "1"), (b, "1")), Pp)


def test_legacy_valuation_examples():
    assert legacy_valuate(a, Pp) == a
    assert legacy_valuate(lname((a, "p"), (b, "q")), Pp) == hset(a)
    assert legacy_valuate(LName(frozenset()), Pp) == EMPTY


def test_mix_examples():
    assert mix(P2, {"p": a_, "q": b_}) == x
    assert mix(P2, {}) == EMPTY_NAME
    y = pname((a_, "p"), (b_, "1"))
    flat = mix(P2, {"1": y})
    assert flat == pname((a_, "p"), (b_, "1"), (b_, "p"), (b_, "q"))
    with pytest.raises(NotAntichain):
        mix(P2, {"1": a_, "p": b_})


def test_mix_matches_displayed_formula():
    els = list(P2.elements)
    rel = set(P2.leq_pairs)
    f = {"p": pname((a_, "1"), (b_, "q")), "q": pname((b, "1"))}
    expected = oracles.mix(els, rel, {k: plain_name(v) for k, v in f.items()})
    assert plain_name(mix(P2, f)) == expected


def test_purify_examples():
    y = pname((b, "1"))
    assert purify(pname((a, "p"), (y, "q")), {a}) == pname((a, "p"), (EMPTY_NAME, "q"))
    assert purify(pname((b, "p")), set()) == EMPTY_NAME
    xc = check_name(P2, hset(a, hset(b)))
    assert purify(xc, {a, b}) == xc


def test_set_counterpart_examples():
    assert set_counterpart(P2, EMPTY_NAME) == EMPTY_NAME
    assert set_counterpart(P2, x) == EMPTY_NAME
    # nested urelement entries surface through check-names
    outer = pname((x, "1"))
    assert set_counterpart(P2, outer) == pname((a_, "p"), (b_, "q"))
    xc = check_name(P2, hset(a, EMPTY))
    for G in P2.generic_filters():
        assert valuate(set_counterpart(P2, xc), G) == valuate(xc, G)


def test_j_examples():
    assert embed_j(P2, a) == a_
    assert embed_j(P2, LName(frozenset())) == EMPTY_NAME
    assert embed_j(P2, lname((a, "p"))) == pname((a_, "p"))
    assert j_preimage(P2, pname((a_, "p"))) == lname((a, "p"))
    assert j_preimage(P2, x) is None


def test_act_and_gamma():
    swap = Automorphism.swap([a, b], a, b)
    assert act(swap, pname((a, "p"))) == pname((b, "p"))
    assert act(Automorphism.identity([a, b]), x) == x
    g = gamma_name(P2)
    G = frozenset({"1", "p"})
    assert valuate(g, G) == hset(*(P2.condition_value(p) for p in G))


def test_close_pool_examples():
    seed = pname((a_, "p"))
    pool = close_pool(P2, [seed])
    assert pool.names == {seed, a_}
    assert len(close_pool(P2, [])) == 0
    with pytest.raises(PoolError):
        NamePool(P2, [seed])
    with pytest.raises(InvalidName):
        close_pool(P2, [pname((a, "1"), (b, "1"))])


# properties ------------------------------------------------------------

posets = st.sampled_from(list(catalog().values()))
seeds = st.integers(0, 10**6)


@settings(max_examples=150)
@given(posets, seeds)
def test_random_names_valid_and_match_oracle(P, seed):
    n = random_name(P, random.Random(seed))
    assert is_valid_name(P, n)
    for G in P.generic_filters():
        v = valuate(n, G)
        assert plain_value(v) == oracles.valuate(plain_name(n), G)
        assert kernel(v) <= n.kernel


@settings(max_examples=150)
@given(posets, seeds)
def test_mixture_agrees_below_each_condition(P, seed):
    rng = random.Random(seed)
    X = random_antichain(P, rng)
    f = {p: random_name(P, rng) for p in X}
    v = mix(P, f)
    assert is_valid_name(P, v)
    for p in X:
        for G in P.generic_filters():
            if p in G:
                assert valuate(v, G) == valuate(f[p], G)


@settings(max_examples=100)
@given(posets, seeds, st.frozensets(st.sampled_from([a, b, c])))
def test_purify_bounds_kernel(P, seed, A):
    n = random_name(P, random.Random(seed))
    y = purify(n, A)
    assert y.kernel <= A
    assert is_valid_name(P, y)
    assert purify(y, A) == y


@settings(max_examples=150)
@given(posets, seeds)
def test_set_counterpart_members_and_range(P, seed):
    n = random_name(P, random.Random(seed))
    s = set_counterpart(P, n)
    assert is_valid_name(P, s)
    sigma = j_preimage(P, s)
    assert sigma is not None and embed_j(P, sigma) == s
    for G in P.generic_filters():
        v = valuate(n, G)
        if not isinstance(v, Urelement):
            assert valuate(s, G) == v


@settings(max_examples=100)
@given(posets, seeds)
def test_automorphism_action_commutes_with_valuation(P, seed):
    n = random_name(P, random.Random(seed))
    pi = Automorphism([a, b, c], {a: b, b: c, c: a})
    for G in P.generic_filters():
        assert valuate(act(pi, n), G) == pi(valuate(n, G))
