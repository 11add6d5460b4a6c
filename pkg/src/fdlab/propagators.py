"""Single-constraint propagators for the four notions.

propagate() computes the greatest fixpoint by deleting unsupported values:
all unsupported values for the domain notion, unsupported endpoint values
for the three bounds notions (which keeps interior holes intact, so the
bounds(Z)/bounds(R) results are range-shaped prunings of the input).
Deletion order does not affect the result; the test suite certifies this
against an exhaustive deletion-order oracle.

propagate_linear_br() is the practical counterpart for linear constraints:
O(n) bound shaving per pass with exact rational division and inward
rounding.  It reaches the same fixpoint as propagate(.., BOUNDS_R).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .checkers import (
    CandidateFn,
    ConsistencyNotion,
    _find_int_support,
    _real_support,
)
from .constraints import (
    Constraint,
    LinEq,
    LinLe,
    LinNe,
    RealSemanticsUndefined,
    real_defined,
    vars_of,
)
from .domains import Domain, VarId, checked_add, checked_mul


@dataclass(frozen=True)
class PropagationResult:
    """Fixpoint domain (None on failure) plus per-variable removed values."""

    domain: Domain | None
    pruned: tuple[tuple[VarId, tuple[int, ...]], ...]

    @property
    def failed(self) -> bool:
        return self.domain is None


def _result(
    domain: Domain | None, removed: dict[VarId, list[int]]
) -> PropagationResult:
    pruned = tuple(
        (v, tuple(sorted(vals)))
        for v, vals in sorted(removed.items(), key=lambda kv: kv[0].index)
        if vals
    )
    return PropagationResult(domain, pruned)


def _supported(
    d: Domain, c: Constraint, notion: ConsistencyNotion, var: VarId, value: int
) -> bool:
    if notion is ConsistencyNotion.BOUNDS_R:
        return _real_support(d, c, var, value)[0]
    if notion is ConsistencyNotion.BOUNDS_Z:
        box: CandidateFn = lambda v: range(d.inf(v), d.sup(v) + 1)
        return _find_int_support(c, var, value, box) is not None
    sets: CandidateFn = lambda v: d.get(v).values
    return _find_int_support(c, var, value, sets) is not None


def propagate(
    d: Domain, c: Constraint, notion: ConsistencyNotion
) -> PropagationResult:
    if notion is ConsistencyNotion.BOUNDS_R and not real_defined(c):
        raise RealSemanticsUndefined(
            f"{type(c).__name__} has no real semantics; bounds(R) undefined"
        )
    removed: dict[VarId, list[int]] = {}
    cvars = vars_of(c)

    if notion is ConsistencyNotion.DOMAIN:
        while True:
            stale = [
                (var, val)
                for var in cvars
                for val in d.get(var)
                if not _supported(d, c, notion, var, val)
            ]
            if not stale:
                return _result(d, removed)
            for var, val in stale:
                removed.setdefault(var, []).append(val)
                shrunk = d.get(var).remove(val)
                if shrunk is None:
                    return _result(None, removed)
                d = d.with_set(var, shrunk)

    # bounds notions: peel unsupported endpoints until every bound has support
    changed = True
    while changed:
        changed = False
        for var in cvars:
            for side in ("inf", "sup"):
                while True:
                    s = d.get(var)
                    value = s.inf if side == "inf" else s.sup
                    if _supported(d, c, notion, var, value):
                        break
                    removed.setdefault(var, []).append(value)
                    shrunk = s.remove(value)
                    if shrunk is None:
                        return _result(None, removed)
                    d = d.with_set(var, shrunk)
                    changed = True
    return _result(d, removed)


def _shave_bounds(
    d: Domain, terms: list[tuple[VarId, int]], rhs: int, equality: bool
) -> Domain | None:
    """One shaving pass, linear in the number of terms; None on emptied variable."""
    smin = smax = 0
    contrib = []
    for var, a in terms:
        p1 = checked_mul(a, d.inf(var))
        p2 = checked_mul(a, d.sup(var))
        lo, hi = (p1, p2) if p1 <= p2 else (p2, p1)
        contrib.append((lo, hi))
        smin = checked_add(smin, lo)
        smax = checked_add(smax, hi)
    for (var, a), (lo, hi) in zip(terms, contrib):
        # residual range over the other terms; differences of checked sums
        rmin = smin - lo
        rmax = smax - hi
        s = d.get(var)
        hi_q = Fraction(rhs - rmin, a)
        lo_q = Fraction(rhs - rmax, a)
        if a > 0:
            new_hi = math.floor(hi_q)
            new_lo = math.ceil(lo_q) if equality else s.inf
        else:
            new_lo = math.ceil(hi_q)
            new_hi = math.floor(lo_q) if equality else s.sup
        if new_lo > s.inf or new_hi < s.sup:
            shrunk = s.clamp(max(new_lo, s.inf), min(new_hi, s.sup))
            if shrunk is None:
                return None
            d = d.with_set(var, shrunk)
            p1 = checked_mul(a, shrunk.inf)
            p2 = checked_mul(a, shrunk.sup)
            nlo, nhi = (p1, p2) if p1 <= p2 else (p2, p1)
            smin += nlo - lo
            smax += nhi - hi
    return d


def propagate_linear_br(d: Domain, c: Constraint) -> PropagationResult:
    """bounds(R) fixpoint of a single linear constraint by bound shaving."""
    if not isinstance(c, (LinEq, LinLe, LinNe)):
        raise ValueError("propagate_linear_br only handles linear constraints")
    before = d
    terms = [(t.var, t.coeff) for t in c.terms]

    if isinstance(c, LinNe):
        # over the reals a disequality only bites when every other variable
        # is pinned; then the single forbidden value can shave an endpoint
        changed = True
        while changed and d is not None:
            changed = False
            for var, a in terms:
                if any(
                    d.inf(ov) != d.sup(ov) for ov, _ in terms if ov != var
                ):
                    continue
                s_fixed = sum(
                    checked_mul(oa, d.inf(ov)) for ov, oa in terms if ov != var
                )
                forbidden = Fraction(c.rhs - s_fixed, a)
                if forbidden.denominator != 1:
                    continue
                fv = forbidden.numerator
                s = d.get(var)
                if fv == s.inf or fv == s.sup:
                    shrunk = s.remove(fv)
                    if shrunk is None:
                        d = None
                        break
                    d = d.with_set(var, shrunk)
                    changed = True
            if d is None:
                break
    else:
        while d is not None:
            nxt = _shave_bounds(d, terms, c.rhs, isinstance(c, LinEq))
            if nxt is None or nxt is d or nxt.sets == d.sets:
                d = nxt
                break
            d = nxt

    if d is None:
        return PropagationResult(None, ())
    removed: dict[VarId, list[int]] = {}
    for var, _ in terms:
        gone = sorted(set(before.get(var).values) - set(d.get(var).values))
        if gone:
            removed[var] = gone
    return _result(d, removed)
