"""Naive reference implementations for cross-checking the lab.

Everything here is written for obviousness, not speed, and shares no
pruning or scanning logic with checkers/propagators: integer notions are
literal quantifier expansions over itertools.product; real bound support
is decided by vertex/corner enumeration for the linear and product
constraints, a dense 1/n rational grid for alldifferent, and an
intermediate-value sign check for the monotone function constraint.

oracle_fixpoint explores every single-deletion order with memoization and
asserts that all orders converge to the same result, which certifies both
maximality and confluence of the production propagators on small inputs.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .constraints import (
    AllDifferent,
    Constraint,
    LinEq,
    LinLe,
    LinNe,
    MonoBij,
    ProductLe,
    RealSemanticsUndefined,
    mono_eval_frac,
    mono_requires_nonneg,
    real_defined,
    sat_int,
    vars_of,
)
from .checkers import ConsistencyNotion
from .domains import Domain, Valuation, VarId


class OracleBudgetExceeded(RuntimeError):
    """The requested oracle computation left the configured desk-scale budget."""


def _int_support_exists(
    c: Constraint,
    pin: VarId,
    value: int,
    seq_of,
    budget: list[int],
) -> bool:
    others = [v for v in vars_of(c) if v != pin]
    for combo in itertools.product(*(seq_of(v) for v in others)):
        budget[0] -= 1
        if budget[0] < 0:
            raise OracleBudgetExceeded("integer support enumeration budget")
        bindings = dict(zip(others, combo))
        bindings[pin] = value
        if sat_int(c, Valuation(bindings)):
            return True
    return False


def _corners(boxes: list[tuple[int, int]]):
    return itertools.product(*({l, u} for l, u in boxes))


def _real_support_exists(d: Domain, c: Constraint, pin: VarId, value: int) -> bool:
    if isinstance(c, (LinEq, LinLe, LinNe)):
        others = [
            (t.var, t.coeff, d.inf(t.var), d.sup(t.var))
            for t in c.terms
            if t.var != pin
        ]
        a_pin = next(t.coeff for t in c.terms if t.var == pin)
        target = Fraction(c.rhs - a_pin * value)
        boxes = [(l, u) for _, _, l, u in others]
        coeffs = [a for _, a, _, _ in others]
        if isinstance(c, LinLe):
            return any(
                sum(a * v for a, v in zip(coeffs, corner)) <= target
                for corner in _corners(boxes)
            )
        if isinstance(c, LinNe):
            # if every corner hit the forbidden value the box would be a point
            return any(
                sum(a * v for a, v in zip(coeffs, corner)) != target
                for corner in _corners(boxes)
            )
        # LinEq: a solution, if any, sits at a polytope vertex: all but at
        # most one variable at an endpoint, the last one solved exactly.
        n = len(others)
        if n == 0:
            return target == 0
        for j in range(n):
            rest = [b for i, b in enumerate(boxes) if i != j]
            rest_coeffs = [a for i, a in enumerate(coeffs) if i != j]
            lj, uj = boxes[j]
            for corner in _corners(rest):
                resid = target - sum(a * v for a, v in zip(rest_coeffs, corner))
                vj = resid / coeffs[j]
                if Fraction(lj) <= vj <= Fraction(uj):
                    return True
        return False
    if isinstance(c, AllDifferent):
        m = len(c.vars)
        others = [v for v in c.vars if v != pin]

        def grid(v: VarId) -> list[Fraction]:
            l, u = d.inf(v), d.sup(v)
            return [Fraction(l) + Fraction(k, m) for k in range((u - l) * m + 1)]

        def place(i: int, used: set[Fraction]) -> bool:
            if i == len(others):
                return True
            for cand in grid(others[i]):
                if cand not in used:
                    if place(i + 1, used | {cand}):
                        return True
            return False

        return place(0, {Fraction(value)})
    if isinstance(c, ProductLe):
        def box(v: VarId) -> tuple[int, int]:
            return (value, value) if v == pin else (d.inf(v), d.sup(v))

        (l1, u1), (l2, u2), (l3, u3) = box(c.x1), box(c.x2), box(c.x3)
        return any(v1 * v2 <= u3 for v1, v2 in _corners([(l1, u1), (l2, u2)]))
    if isinstance(c, MonoBij):
        l1, u1 = d.inf(c.x1), d.sup(c.x1)
        l2, u2 = d.inf(c.x2), d.sup(c.x2)
        if pin == c.x1:
            l1 = u1 = value
        else:
            l2 = u2 = value
        if mono_requires_nonneg(c.func):
            l2 = max(l2, 0)
            if l2 > u2:
                return False
        ga = mono_eval_frac(c.func, Fraction(l2))
        gb = mono_eval_frac(c.func, Fraction(u2))
        # need some x2 in [l2,u2] with g(x2) in [l1,u1]; g is continuous and
        # strictly monotone, so its image is exactly [min(ga,gb), max(ga,gb)]
        lo, hi = (ga, gb) if ga <= gb else (gb, ga)
        return not (hi < l1 or lo > u1)
    raise RealSemanticsUndefined(f"{type(c).__name__} has no real semantics")


def _bound_values(d: Domain, v: VarId) -> tuple[int, ...]:
    s = d.get(v)
    return (s.inf,) if s.inf == s.sup else (s.inf, s.sup)


def oracle_consistent(
    d: Domain,
    c: Constraint,
    notion: ConsistencyNotion,
    budget: int = 2_000_000,
) -> bool:
    """Ground-truth consistency by literal expansion of the definitions."""
    counter = [budget]
    if notion is ConsistencyNotion.DOMAIN:
        return all(
            _int_support_exists(c, var, val, lambda v: d.get(v).values, counter)
            for var in vars_of(c)
            for val in d.get(var)
        )
    if notion is ConsistencyNotion.BOUNDS_D:
        return all(
            _int_support_exists(c, var, val, lambda v: d.get(v).values, counter)
            for var in vars_of(c)
            for val in _bound_values(d, var)
        )
    if notion is ConsistencyNotion.BOUNDS_Z:
        return all(
            _int_support_exists(
                c, var, val, lambda v: range(d.inf(v), d.sup(v) + 1), counter
            )
            for var in vars_of(c)
            for val in _bound_values(d, var)
        )
    if not real_defined(c):
        raise RealSemanticsUndefined(f"{type(c).__name__} has no real semantics")
    return all(
        _real_support_exists(d, c, var, val)
        for var in vars_of(c)
        for val in _bound_values(d, var)
    )


def _culprits(
    d: Domain, c: Constraint, notion: ConsistencyNotion, counter: list[int]
) -> list[tuple[VarId, int]]:
    out = []
    if notion is ConsistencyNotion.DOMAIN:
        for var in vars_of(c):
            for val in d.get(var):
                if not _int_support_exists(
                    c, var, val, lambda v: d.get(v).values, counter
                ):
                    out.append((var, val))
        return out
    for var in vars_of(c):
        for val in _bound_values(d, var):
            if notion is ConsistencyNotion.BOUNDS_D:
                ok = _int_support_exists(
                    c, var, val, lambda v: d.get(v).values, counter
                )
            elif notion is ConsistencyNotion.BOUNDS_Z:
                ok = _int_support_exists(
                    c, var, val, lambda v: range(d.inf(v), d.sup(v) + 1), counter
                )
            else:
                ok = _real_support_exists(d, c, var, val)
            if not ok:
                out.append((var, val))
    return out


def oracle_fixpoint(
    d: Domain,
    c: Constraint,
    notion: ConsistencyNotion,
    budget: int = 200_000,
) -> Domain | None:
    """Greatest consistent sub-domain via exhaustive deletion orders.

    Explores every order of single culprit deletions (memoized) and asserts
    all orders converge to the same fixpoint; None means failure (every
    order empties some variable).
    """
    if notion is ConsistencyNotion.BOUNDS_R and not real_defined(c):
        raise RealSemanticsUndefined(f"{type(c).__name__} has no real semantics")
    counter = [budget * 50]
    seen: dict[tuple, Domain | None] = {}
    states = [budget]

    def key(dom: Domain) -> tuple:
        return tuple(s.values for s in dom.sets)

    def fix(dom: Domain) -> Domain | None:
        k = key(dom)
        if k in seen:
            return seen[k]
        states[0] -= 1
        if states[0] < 0:
            raise OracleBudgetExceeded("deletion-search state budget")
        cs = _culprits(dom, c, notion, counter)
        if not cs:
            seen[k] = dom
            return dom
        results = []
        for var, val in cs:
            shrunk = dom.get(var).remove(val)
            if shrunk is None:
                results.append(None)
            else:
                results.append(fix(dom.with_set(var, shrunk)))
        first = results[0]
        for r in results[1:]:
            same = (r is None and first is None) or (
                r is not None and first is not None and key(r) == key(first)
            )
            if not same:
                raise AssertionError(
                    f"deletion order changed the fixpoint on {dom} for {c}"
                )
        seen[k] = first
        return first

    return fix(d)


def oracle_solutions(
    all_vars: list[VarId], d: Domain, constraints: list[Constraint]
) -> list[Valuation]:
    """All integral assignments over d's sets satisfying every constraint."""
    out = []
    for combo in itertools.product(*(d.get(v).values for v in all_vars)):
        theta = Valuation(dict(zip(all_vars, combo)))
        ok = True
        for c in constraints:
            cv = vars_of(c)
            sub = Valuation({v: theta[v] for v in cv})
            if not sat_int(c, sub):
                ok = False
                break
        if ok:
            out.append(theta)
    return out


def oracle_subset_sum(items: list[int], target: int) -> bool:
    """Plain 2^n scan: does some subset of items sum to target?"""
    for mask in range(1 << len(items)):
        s = 0
        for i, a in enumerate(items):
            if mask >> i & 1:
                s += a
        if s == target:
            return True
    return False
