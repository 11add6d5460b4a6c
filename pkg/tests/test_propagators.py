"""Propagator tests: worked fixpoints, agreement with the deletion oracle,
range-shaped pruning for the bounds notions, and the fast linear pass."""

import pytest

from conftest import (
    fresh_rng,
    make_vars,
    random_domain,
    random_int_constraint,
    random_linear,
)
from fdlab import (
    Domain,
    IntSet,
    LinEq,
    LinNe,
    LinTerm,
    Mod,
    ProductLe,
    RealSemanticsUndefined,
    propagate,
    propagate_linear_br,
)
from fdlab.checkers import ConsistencyNotion, check
from fdlab.constraints import AllDifferent, real_defined
from fdlab.oracle import oracle_fixpoint

X1, X2, X3 = make_vars(3)
C_LIN = LinEq((LinTerm(1, X1), LinTerm(-3, X2), LinTerm(-5, X3)), 0)

NOTIONS = list(ConsistencyNotion)


def dom3(s1, s2, s3):
    return Domain((IntSet.of(s1), IntSet.of(s2), IntSet.of(s3)))


def test_domain_propagation_reaches_the_known_fixpoint():
    d0 = dom3(range(2, 8), range(0, 3), range(-1, 3))
    res = propagate(d0, C_LIN, ConsistencyNotion.DOMAIN)
    assert not res.failed
    assert res.domain == dom3([3, 5, 6], [0, 1, 2], [0, 1])
    removed = dict((v.name, vals) for v, vals in res.pruned)
    assert removed == {"x1": (2, 4, 7), "x3": (-1, 2)}


def test_fixpoint_is_consistent_and_maximal_against_oracle():
    rng = fresh_rng(21)
    for _ in range(150):
        n = rng.randint(1, 3)
        vs = make_vars(n)
        c = random_int_constraint(rng, vs)
        d = random_domain(rng, n, max_size=4)
        for notion in NOTIONS:
            if notion is ConsistencyNotion.BOUNDS_R and not real_defined(c):
                continue
            got = propagate(d, c, notion)
            want = oracle_fixpoint(d, c, notion)
            if want is None:
                assert got.failed
            else:
                assert not got.failed
                assert got.domain == want
                assert check(got.domain, c, notion).consistent


def test_propagation_is_idempotent():
    rng = fresh_rng(22)
    for _ in range(80):
        n = rng.randint(1, 3)
        vs = make_vars(n)
        c = random_int_constraint(rng, vs)
        d = random_domain(rng, n, max_size=4)
        for notion in NOTIONS:
            if notion is ConsistencyNotion.BOUNDS_R and not real_defined(c):
                continue
            first = propagate(d, c, notion)
            if first.failed:
                continue
            again = propagate(first.domain, c, notion)
            assert not again.failed
            assert again.domain == first.domain
            assert again.pruned == ()


def test_bounds_notions_only_trim_bounds():
    # a bounds propagator never creates or fills holes: the result is the
    # input intersected with a narrower interval
    rng = fresh_rng(23)
    for _ in range(120):
        n = rng.randint(1, 3)
        vs = make_vars(n)
        c = random_int_constraint(rng, vs)
        d = random_domain(rng, n, max_size=5)
        for notion in (
            ConsistencyNotion.BOUNDS_D,
            ConsistencyNotion.BOUNDS_Z,
            ConsistencyNotion.BOUNDS_R,
        ):
            if notion is ConsistencyNotion.BOUNDS_R and not real_defined(c):
                continue
            res = propagate(d, c, notion)
            if res.failed:
                continue
            for v in vs:
                s = res.domain.get(v)
                clamped = d.get(v).clamp(s.inf, s.sup)
                assert clamped is not None and clamped == s


def test_pruned_values_account_for_the_difference():
    rng = fresh_rng(24)
    for _ in range(80):
        n = rng.randint(1, 3)
        vs = make_vars(n)
        c = random_int_constraint(rng, vs)
        d = random_domain(rng, n, max_size=4)
        res = propagate(d, c, ConsistencyNotion.DOMAIN)
        if res.failed:
            continue
        pruned = dict(res.pruned)
        for v in vs:
            gone = tuple(x for x in d.get(v).values if x not in res.domain.get(v))
            assert pruned.get(v, ()) == gone


def test_failure_reported_as_failed_result():
    d = Domain((IntSet.of([1, 2]),))
    x = make_vars(1)[0]
    res = propagate(d, LinEq((LinTerm(1, x),), 9), ConsistencyNotion.DOMAIN)
    assert res.failed and res.domain is None


def test_real_propagation_rejects_integer_only_constraints():
    d = dom3([0, 1], [0, 1], [1, 2])
    with pytest.raises(RealSemanticsUndefined):
        propagate(d, Mod(X1, X2, X3), ConsistencyNotion.BOUNDS_R)


def test_disequality_trims_only_a_fully_determined_endpoint():
    x, y = make_vars(2)
    c = LinNe((LinTerm(1, x), LinTerm(1, y)), 6)
    fixed = Domain((IntSet.interval(3, 5), IntSet.of([1])))
    res = propagate(fixed, c, ConsistencyNotion.BOUNDS_Z)
    assert res.domain.get(x).values == (3, 4)
    loose = Domain((IntSet.interval(3, 5), IntSet.of([1, 2])))
    res2 = propagate(loose, c, ConsistencyNotion.BOUNDS_Z)
    assert res2.domain == loose  # both ends supported, nothing to trim


def test_linear_real_pass_matches_worked_example():
    x, y = make_vars(2)
    c = LinEq((LinTerm(1, x), LinTerm(2, y)), 3)
    d = Domain((IntSet.interval(0, 3), IntSet.interval(0, 3)))
    res = propagate_linear_br(d, c)
    assert res.domain.get(x).values == (1, 2, 3)
    assert res.domain.get(y).values == (0, 1)
    assert dict(res.pruned) == {x: (0,), y: (2, 3)}


def test_linear_real_pass_equals_generic_real_propagation():
    rng = fresh_rng(25)
    for _ in range(200):
        n = rng.randint(1, 4)
        vs = make_vars(n)
        c = random_linear(rng, vs)
        d = random_domain(rng, n, max_size=5)
        fast = propagate_linear_br(d, c)
        slow = propagate(d, c, ConsistencyNotion.BOUNDS_R)
        assert fast.failed == slow.failed
        if not fast.failed:
            assert fast.domain == slow.domain


def test_linear_real_pass_rejects_non_linear():
    with pytest.raises(ValueError):
        propagate_linear_br(
            dom3([0, 1], [0, 1], [0, 1]), ProductLe(X1, X2, X3)
        )


def test_alldifferent_real_propagation_squeezes_pinned_neighbours():
    c = AllDifferent((X1, X2, X3))
    d = dom3([2], [2, 3], [2, 3, 4])
    res = propagate(d, c, ConsistencyNotion.BOUNDS_R)
    assert not res.failed
    assert res.domain.get(X2).values == (3,)
    assert res.domain.get(X3).values == (4,)
