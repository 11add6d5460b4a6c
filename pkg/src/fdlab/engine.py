"""Model container and the event-driven propagation engine.

The engine runs single-constraint propagators to a common fixpoint with a
FIFO queue deduplicated per propagator.  Re-queueing is event-filtered:
bounds(Z)/bounds(R) propagators only react to bound changes of their
variables, domain/bounds(D) propagators also react to interior holes.
Filtering is lossless and the fixpoint is queue-order independent; both
facts are exercised by tests via the `filter_events` and `queue_policy`
knobs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

from .checkers import ConsistencyNotion
from .constraints import Constraint, MonoBij, ReifLinLe, mono_requires_nonneg, real_defined, vars_of
from .domains import Domain, IntSet, VarId
from .propagators import PropagationResult, propagate


class ModelError(ValueError):
    """Malformed model: bad variables, domains, or constraint attachments."""


class EventKind(Enum):
    LOWER_BOUND = "lower"
    UPPER_BOUND = "upper"
    HOLE = "hole"
    FIXED = "fixed"


@dataclass(frozen=True)
class Event:
    var: VarId
    kind: EventKind


_BOUND_KINDS = frozenset(
    {EventKind.LOWER_BOUND, EventKind.UPPER_BOUND, EventKind.FIXED}
)


@dataclass(frozen=True)
class Model:
    vars: tuple[VarId, ...]
    initial: Domain
    constraints: tuple[tuple[Constraint, ConsistencyNotion], ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.labels == ():
            object.__setattr__(
                self, "labels", tuple(f"c{i + 1}" for i in range(len(self.constraints)))
            )
        self._validate()

    def _validate(self) -> None:
        for i, v in enumerate(self.vars):
            if v.index != i:
                raise ModelError(f"variable {v.name} has index {v.index}, expected {i}")
            if not v.name:
                raise ModelError("variable names must be non-empty")
        names = [v.name for v in self.vars]
        if len(set(names)) != len(names):
            raise ModelError("variable names must be unique")
        if len(self.initial.sets) != len(self.vars):
            raise ModelError("domain arity does not match variable count")
        if len(self.labels) != len(self.constraints):
            raise ModelError("constraint label arity mismatch")
        if len(set(self.labels)) != len(self.labels):
            raise ModelError("constraint labels must be unique")
        declared = set(self.vars)
        for c, notion in self.constraints:
            for v in vars_of(c):
                if v not in declared:
                    raise ModelError(f"constraint uses undeclared variable {v.name}")
            if notion is ConsistencyNotion.BOUNDS_R and not real_defined(c):
                raise ModelError(
                    f"{type(c).__name__} cannot be attached at bounds(R)"
                )
            if isinstance(c, ReifLinLe):
                s = self.initial.get(c.b)
                if s.inf < 0 or s.sup > 1:
                    raise ModelError(
                        f"reified bool {c.b.name} must range over a subset of {{0,1}}"
                    )
            if isinstance(c, MonoBij) and mono_requires_nonneg(c.func):
                if self.initial.get(c.x2).inf < 0:
                    raise ModelError(
                        f"{c.x2.name} must be non-negative for this function"
                    )

    @classmethod
    def build(
        cls,
        var_domains: list[tuple[str, IntSet]],
        constraints: list[tuple[Constraint, ConsistencyNotion]],
        labels: list[str] | None = None,
    ) -> "Model":
        vars_ = tuple(VarId(i, name) for i, (name, _) in enumerate(var_domains))
        dom = Domain(tuple(s for _, s in var_domains))
        return cls(
            vars_,
            dom,
            tuple(constraints),
            tuple(labels) if labels is not None else (),
        )

    def var(self, name: str) -> VarId:
        for v in self.vars:
            if v.name == name:
                return v
        raise KeyError(name)


@dataclass(frozen=True)
class TraceRecord:
    """One propagator run that changed the domain."""

    label: str
    events: tuple[Event, ...]
    domain: Domain


def _diff_events(old: Domain, new: Domain, vars_: tuple[VarId, ...]) -> list[Event]:
    events: list[Event] = []
    for v in vars_:
        os, ns = old.get(v), new.get(v)
        if os.values == ns.values:
            continue
        if ns.inf > os.inf:
            events.append(Event(v, EventKind.LOWER_BOUND))
        if ns.sup < os.sup:
            events.append(Event(v, EventKind.UPPER_BOUND))
        if ns.inf == os.inf and ns.sup == os.sup:
            events.append(Event(v, EventKind.HOLE))
        if ns.is_singleton and not os.is_singleton:
            events.append(Event(v, EventKind.FIXED))
    return events


def _wakes(notion: ConsistencyNotion, kinds: set[EventKind]) -> bool:
    if notion in (ConsistencyNotion.BOUNDS_Z, ConsistencyNotion.BOUNDS_R):
        return bool(kinds & _BOUND_KINDS)
    return bool(kinds)


def _run(
    m: Model,
    d: Domain,
    record: bool,
    filter_events: bool,
    queue_policy: str,
) -> tuple[PropagationResult, list[TraceRecord]]:
    watchers: dict[VarId, list[int]] = {}
    for i, (c, _) in enumerate(m.constraints):
        for v in vars_of(c):
            watchers.setdefault(v, []).append(i)

    pending = deque(range(len(m.constraints)))
    queued = set(pending)
    removed: dict[VarId, list[int]] = {}
    records: list[TraceRecord] = []

    while pending:
        if queue_policy == "lifo":
            i = pending.pop()
        else:
            i = pending.popleft()
        queued.discard(i)
        c, notion = m.constraints[i]
        res = propagate(d, c, notion)
        for v, vals in res.pruned:
            removed.setdefault(v, []).extend(vals)
        if res.failed:
            return PropagationResult(None, _sorted_pruned(removed)), records
        events = _diff_events(d, res.domain, vars_of(c))
        if events:
            if record:
                records.append(TraceRecord(m.labels[i], tuple(events), res.domain))
            kinds_by_var: dict[VarId, set[EventKind]] = {}
            for ev in events:
                kinds_by_var.setdefault(ev.var, set()).add(ev.kind)
            for v, kinds in kinds_by_var.items():
                for j in watchers.get(v, ()):
                    if j == i or j in queued:
                        continue
                    _, jnotion = m.constraints[j]
                    if not filter_events or _wakes(jnotion, kinds):
                        pending.append(j)
                        queued.add(j)
        d = res.domain
    return PropagationResult(d, _sorted_pruned(removed)), records


def _sorted_pruned(
    removed: dict[VarId, list[int]]
) -> tuple[tuple[VarId, tuple[int, ...]], ...]:
    return tuple(
        (v, tuple(sorted(vals)))
        for v, vals in sorted(removed.items(), key=lambda kv: kv[0].index)
        if vals
    )


def propagate_all(
    m: Model,
    d: Domain | None = None,
    *,
    filter_events: bool = True,
    queue_policy: str = "fifo",
) -> PropagationResult:
    """Common fixpoint of all attached propagators, or failure."""
    res, _ = _run(
        m, d if d is not None else m.initial, False, filter_events, queue_policy
    )
    return res


def trace(
    m: Model,
    d: Domain | None = None,
    *,
    filter_events: bool = True,
    queue_policy: str = "fifo",
) -> tuple[PropagationResult, list[TraceRecord]]:
    """Like propagate_all, also returning the ordered change records."""
    return _run(
        m, d if d is not None else m.initial, True, filter_events, queue_policy
    )


def format_trace(initial: Domain, records: list[TraceRecord]) -> str:
    """Line-oriented replay log: label, event kind, var, old/new bounds."""
    lines = []
    prev = initial
    for rec in records:
        for ev in rec.events:
            ob = prev.get(ev.var)
            nb = rec.domain.get(ev.var)
            lines.append(
                f"{rec.label} {ev.kind.value} {ev.var.name} "
                f"[{ob.inf},{ob.sup}] -> [{nb.inf},{nb.sup}]"
            )
        prev = rec.domain
    return "\n".join(lines)
