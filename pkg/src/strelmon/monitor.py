"""Offline monitoring engine.

``monitor`` evaluates a formula over a trace on a dynamic weighted graph and
returns one piecewise-constant verdict signal per location.  Verdicts live in
the signal domain carried by the context (Boolean or extended-real max/min).

Structure: atoms apply the interpretation pointwise, Boolean connectives act
stepwise on merged step grids, until/since run an exact event sweep per
location, and the spatial operators evaluate the graph snapshot at every time
where any input signal or the graph itself changes.  The spatial evaluations
are the flooding / fixpoint algorithms; their contracts are spelled out on
the functions and cross-checked against brute-force oracles in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Optional

from .algebra import SignalDomain
from .logic import (
    And,
    Atomic,
    Escape,
    Formula,
    Interval,
    Not,
    Reach,
    Since,
    Until,
    desugar,
    iter_subformulas,
)
from .signals import (
    SpatialSignal,
    SpatioTemporalSignal,
    TemporalSignal,
    Trace,
)
from .space import (
    DistanceFunction,
    DynamicalSpatialModel,
    SpatialModel,
    check_strictly_positive,
    min_distance_matrix,
)


class SemanticError(ValueError):
    """Name-resolution failures, empty evaluable domains, bad intervals."""


_AT_PREFIX = "at_"


@dataclass
class MonitorContext:
    """Everything a monitoring run needs besides the formula.

    ``interpretation`` optionally maps atom names to functions of the trace
    value tuple; atoms without an entry fall back to trace variables (bare
    Boolean variables or comparisons).  The names ``true`` and ``false`` and
    the per-location address atoms ``at_<id>`` are built in.
    """

    model: DynamicalSpatialModel
    trace: Trace
    domain: SignalDomain
    distances: Mapping[str, DistanceFunction] = field(default_factory=dict)
    interpretation: Optional[Mapping[str, Callable[[tuple], Any]]] = None

    def __post_init__(self):
        if self.model.location_count != self.trace.location_count:
            raise SemanticError(
                f"trace has {self.trace.location_count} locations but the model has "
                f"{self.model.location_count}"
            )
        if self.model.start > self.trace.start:
            raise SemanticError(
                f"first snapshot at {self.model.start} is after the trace start {self.trace.start}"
            )

    def to_verdict(self, truth: bool) -> Any:
        return self.domain.top if truth else self.domain.bottom


def _atom_signal(ctx: MonitorContext, atom: Atomic, loc: int) -> TemporalSignal:
    """Interpretation of one atom at one location, as a step function."""
    trace_sig = ctx.trace.signals[loc]
    dom = ctx.domain
    if atom.op is None:
        name = atom.name
        if name == "true":
            return TemporalSignal(trace_sig.times[:1], (dom.top,), trace_sig.end_time)
        if name == "false":
            return TemporalSignal(trace_sig.times[:1], (dom.bottom,), trace_sig.end_time)
        if name.startswith(_AT_PREFIX) and name[len(_AT_PREFIX):].isdigit():
            here = int(name[len(_AT_PREFIX):]) == loc
            return TemporalSignal(trace_sig.times[:1], (ctx.to_verdict(here),), trace_sig.end_time)
        if ctx.interpretation is not None and name in ctx.interpretation:
            fn = ctx.interpretation[name]
            values = tuple(fn(v) for v in trace_sig.values)
            return TemporalSignal(trace_sig.times, values, trace_sig.end_time).minimize()
        idx = _resolve_variable(ctx, name)
        if dom.name == "boolean":
            values = tuple(v[idx] != 0 for v in trace_sig.values)
        else:
            values = tuple(math.inf if v[idx] != 0 else -math.inf for v in trace_sig.values)
        return TemporalSignal(trace_sig.times, values, trace_sig.end_time).minimize()
    idx = _resolve_variable(ctx, atom.name)
    c = atom.threshold
    if dom.name == "boolean":
        cmp = {
            ">": lambda x: x > c,
            ">=": lambda x: x >= c,
            "<": lambda x: x < c,
            "<=": lambda x: x <= c,
        }[atom.op]
        values = tuple(cmp(v[idx]) for v in trace_sig.values)
    else:
        # satisfaction margin: positive iff the comparison holds strictly
        if atom.op in (">", ">="):
            values = tuple(v[idx] - c for v in trace_sig.values)
        else:
            values = tuple(c - v[idx] for v in trace_sig.values)
    return TemporalSignal(trace_sig.times, values, trace_sig.end_time).minimize()


def _resolve_variable(ctx: MonitorContext, name: str) -> int:
    if name not in ctx.trace.variables:
        raise SemanticError(
            f"atom {name!r} is neither a trace variable nor an interpreted name; "
            f"variables are {list(ctx.trace.variables)}"
        )
    return ctx.trace.variables.index(name)


def validate_formula(ctx: MonitorContext, formula: Formula) -> None:
    """Check every atom and distance-function name resolves before evaluating."""
    for node in iter_subformulas(formula):
        if isinstance(node, Atomic):
            name = node.name
            if node.op is not None:
                _resolve_variable(ctx, name)
            elif name in ("true", "false"):
                pass
            elif name.startswith(_AT_PREFIX) and name[len(_AT_PREFIX):].isdigit():
                if not int(name[len(_AT_PREFIX):]) < ctx.trace.location_count:
                    raise SemanticError(f"address atom {name!r} names a missing location")
            elif ctx.interpretation is not None and name in ctx.interpretation:
                pass
            else:
                _resolve_variable(ctx, name)
        elif isinstance(node, (Reach, Escape)):
            if node.distance not in ctx.distances:
                raise SemanticError(
                    f"unknown distance function {node.distance!r}; registered: "
                    f"{sorted(ctx.distances)}"
                )


# ---------------------------------------------------------------------------
# temporal operators


def _common_domain(s1: TemporalSignal, s2: TemporalSignal) -> tuple[TemporalSignal, TemporalSignal]:
    start = max(s1.start, s2.start)
    end = min(s1.end_time, s2.end_time)
    if start > end:
        raise SemanticError(
            f"signals have no common time domain: [{s1.start}, {s1.end_time}] vs "
            f"[{s2.start}, {s2.end_time}]"
        )
    if (s1.start, s1.end_time) != (start, end):
        s1 = s1.restrict(start, end)
    if (s2.start, s2.end_time) != (start, end):
        s2 = s2.restrict(start, end)
    return s1, s2


def monitor_until(interval: Interval, s1: TemporalSignal, s2: TemporalSignal, domain: SignalDomain) -> TemporalSignal:
    """Exact until sweep for piecewise-constant inputs.

    output(t) = choose over t' in [t+lo, t+hi] of
                (s2(t') combine (combine of s1 over [t, t'])).

    The output is a step function whose breakpoints lie among the input step
    times and those times shifted left by the interval bounds, so it suffices
    to evaluate at exactly those event times.  An unbounded interval clips
    the window at the trace end.  The evaluable domain shrinks by the
    interval upper bound (lower bound when unbounded); an empty domain is an
    error rather than a silent constant.
    """
    s1, s2 = _common_domain(s1, s2)
    t0, t_end = s1.start, s1.end_time
    lo = interval.lo
    steps = sorted(set(s1.times) | set(s2.times))
    if interval.bounded:
        hi = interval.hi
        out_end = t_end - hi
        shifts = (0.0, lo, hi)
    else:
        out_end = t_end - lo
        shifts = (0.0, lo)
    if out_end < t0:
        raise SemanticError(
            f"temporal interval [{lo}, {interval.hi if interval.bounded else 'inf'}] exceeds "
            f"the trace horizon: evaluable domain of until is empty"
        )
    events = {t0}
    for s in steps:
        for shift in shifts:
            e = s - shift
            if t0 <= e <= out_end:
                events.add(e)
    choose, combine = domain.choose, domain.combine
    out_times = sorted(events)
    out_values = []
    for e in out_times:
        win_lo = e + lo
        win_hi = (e + hi) if interval.bounded else t_end
        samples = {e, win_lo, win_hi}
        for s in steps:
            if e < s <= win_hi:
                samples.add(s)
        running = domain.top
        acc = domain.bottom
        for u in sorted(samples):
            running = combine(running, s1.value_at(u))
            if u >= win_lo:
                acc = choose(acc, combine(s2.value_at(u), running))
        out_values.append(acc)
    return TemporalSignal(tuple(out_times), tuple(out_values), out_end).minimize()


def monitor_since(interval: Interval, s1: TemporalSignal, s2: TemporalSignal, domain: SignalDomain) -> TemporalSignal:
    """Time-mirrored analogue of monitor_until (window in the past)."""
    s1, s2 = _common_domain(s1, s2)
    t0, t_end = s1.start, s1.end_time
    lo = interval.lo
    steps = sorted(set(s1.times) | set(s2.times))
    if interval.bounded:
        hi = interval.hi
        out_start = t0 + hi
        shifts = (0.0, lo, hi)
    else:
        out_start = t0 + lo
        shifts = (0.0, lo)
    if out_start > t_end:
        raise SemanticError(
            f"temporal interval [{lo}, {interval.hi if interval.bounded else 'inf'}] exceeds "
            f"the trace horizon: evaluable domain of since is empty"
        )
    events = {out_start}
    for s in steps:
        for shift in shifts:
            e = s + shift
            if out_start <= e <= t_end:
                events.add(e)
    choose, combine = domain.choose, domain.combine
    out_times = sorted(events)
    out_values = []
    for e in out_times:
        win_hi = e - lo
        win_lo = (e - hi) if interval.bounded else t0
        samples = {e, win_lo, win_hi}
        for s in steps:
            if win_lo <= s < e:
                samples.add(s)
        running = domain.top
        acc = domain.bottom
        for u in sorted(samples, reverse=True):
            running = combine(running, s1.value_at(u))
            if u <= win_hi:
                acc = choose(acc, combine(s2.value_at(u), running))
        out_values.append(acc)
    return TemporalSignal(tuple(out_times), tuple(out_values), t_end).minimize()


# ---------------------------------------------------------------------------
# spatial operators


def reach(
    model: SpatialModel,
    f: DistanceFunction,
    interval: Interval,
    s1: SpatialSignal,
    s2: SpatialSignal,
    domain: SignalDomain,
) -> SpatialSignal:
    """Dispatch on the upper distance bound: flooding when bounded, fixpoint
    back-propagation when unbounded."""
    dom = f.domain
    hi = dom.infinity if interval.hi is None else interval.hi
    if hi != dom.infinity:
        values = bounded_reach(model, f, interval.lo, hi, list(s1.values), list(s2.values), domain)
    else:
        values = unbounded_reach(model, f, interval.lo, list(s1.values), list(s2.values), domain)
    return SpatialSignal(tuple(values))


def bounded_reach(
    model: SpatialModel,
    f: DistanceFunction,
    d1: Any,
    d2: Any,
    s1: list,
    s2: list,
    domain: SignalDomain,
) -> list:
    """Flooding over route prefixes with accumulated distance at most d2.

    The result at l is the choose over finite route prefixes from l whose
    accumulated distance lands in [d1, d2] of (s2 at the endpoint) combined
    with s1 over the strict prefix.  The queue holds one merged value per
    (location, accumulated distance); a round extends every queue entry
    backwards along incoming edges, contributes to the output when the new
    distance is inside the interval, and re-enqueues only strictly below d2.

    Entries whose value is the domain bottom are dropped (they can never
    change the output), and when d1 is the distance zero an entry dominated
    by a cheaper-and-better one at the same location is pruned; both cuts are
    output-invariant and keep the round structure intact.
    """
    dom = f.domain
    check_strictly_positive(model, f)
    if not dom.leq(d1, d2):
        raise SemanticError(f"malformed distance interval [{d1}, {d2}]")
    n = model.location_count
    bottom = domain.bottom
    choose, combine = domain.choose, domain.combine
    unconstrained_lo = d1 == dom.zero
    s = list(s2) if unconstrained_lo else [bottom] * n
    in_edges = [[(src, f.map(w)) for src, w in model.in_edges[l]] for l in range(n)]
    queue: dict[tuple[int, Any], Any] = {(l, dom.zero): s2[l] for l in range(n)}
    fronts: list[list[tuple[Any, Any]]] = [[] for _ in range(n)]
    while queue:
        nxt: dict[tuple[int, Any], Any] = {}
        for (l, d), v in queue.items():
            if v == bottom:
                continue
            for src, step in in_edges[l]:
                v2 = combine(v, s1[src])
                d2_new = dom.add(d, step)
                if dom.leq(d1, d2_new) and dom.leq(d2_new, d2):
                    s[src] = choose(s[src], v2)
                if dom.lt(d2_new, d2):
                    key = (src, d2_new)
                    prev = nxt.get(key)
                    nxt[key] = v2 if prev is None else choose(prev, v2)
        if unconstrained_lo and nxt:
            nxt = _prune_dominated(nxt, fronts, dom, domain)
        queue = nxt
    return s


def _prune_dominated(
    queue: dict[tuple[int, Any], Any],
    fronts: list[list[tuple[Any, Any]]],
    dom,
    domain: SignalDomain,
) -> dict[tuple[int, Any], Any]:
    """Keep, per location, only entries not dominated closer-and-better.

    Only used with an unconstrained lower bound: an entry at distance d with
    value v contributes nothing beyond what an entry at the same location
    with distance <= d and value >= v already contributes, and the
    dominating entry was enqueued no later, so every extension it feeds is
    still explored.  ``fronts`` carries each location's surviving (distance,
    value) pairs across rounds.
    """
    per_loc: dict[int, list[tuple[Any, Any]]] = {}
    for (l, d), v in queue.items():
        per_loc.setdefault(l, []).append((d, v))
    out: dict[tuple[int, Any], Any] = {}
    for l, entries in per_loc.items():
        front = fronts[l]
        entries.sort(key=lambda pair: _SortKey(pair[0], dom.leq))
        for d, v in entries:
            dominated = any(
                dom.leq(d_old, d) and domain.leq(v, v_old) for d_old, v_old in front
            )
            if dominated:
                continue
            out[(l, d)] = v
            front.append((d, v))
    return out


class _SortKey:
    __slots__ = ("value", "leq")

    def __init__(self, value, leq):
        self.value = value
        self.leq = leq

    def __lt__(self, other):
        return self.leq(self.value, other.value) and self.value != other.value


def unbounded_reach(
    model: SpatialModel,
    f: DistanceFunction,
    d1: Any,
    s1: list,
    s2: list,
    domain: SignalDomain,
) -> list:
    """Reach with no upper distance bound.

    With an unconstrained lower bound the seed is s2 itself; otherwise a
    bounded flooding over [d1, d1 + max edge distance] seeds every endpoint
    whose route first crosses d1.  Seeds are then back-propagated along
    incoming edges until a fixpoint: s[src] absorbs s[dst] combined with
    s1[src] for every edge src -> dst.
    """
    dom = f.domain
    check_strictly_positive(model, f)
    n = model.location_count
    if d1 == dom.zero:
        s = list(s2)
    else:
        d_max = dom.zero
        for _src, w, _dst in model.edges:
            d_max = dom.max(d_max, f.map(w))
        s = bounded_reach(model, f, d1, dom.add(d1, d_max), s1, s2, domain)
    choose, combine = domain.choose, domain.combine
    in_edges = model.in_edges
    active = set(range(n))
    while active:
        nxt: set[int] = set()
        for l in active:
            base = s[l]
            for src, _w in in_edges[l]:
                v2 = choose(combine(base, s1[src]), s[src])
                if v2 != s[src]:
                    s[src] = v2
                    nxt.add(src)
        active = nxt
    return s


def escape(
    model: SpatialModel,
    f: DistanceFunction,
    interval: Interval,
    s1: list | SpatialSignal,
    domain: SignalDomain,
) -> SpatialSignal:
    """Escape: best value over routes leaving l through satisfying locations
    whose endpoint sits at a graph minimum distance inside the interval.

    A matrix e[l][l2] accumulates, over walks from l that first hit l2 at
    their end, the combined value of the walk's locations.  It is seeded on
    the diagonal and expanded backwards along incoming edges until a fixpoint
    (at most one round per location).  The result gates e by the all-pairs
    minimum-distance matrix.
    """
    dom = f.domain
    if isinstance(s1, SpatialSignal):
        s1 = list(s1.values)
    d1 = interval.lo
    d2 = dom.infinity if interval.hi is None else interval.hi
    if not dom.leq(d1, d2):
        raise SemanticError(f"malformed distance interval [{d1}, {d2}]")
    dist = min_distance_matrix(model, f)
    n = model.location_count
    bottom = domain.bottom
    choose, combine = domain.choose, domain.combine
    e = [[bottom] * n for _ in range(n)]
    for l in range(n):
        e[l][l] = s1[l]
    in_edges = model.in_edges
    active: set[tuple[int, int]] = {(l, l) for l in range(n)}
    while active:
        e_next = [row.copy() for row in e]
        nxt: set[tuple[int, int]] = set()
        for l1, l2 in active:
            base = e[l1][l2]
            for src, _w in in_edges[l1]:
                v = choose(e_next[src][l2], combine(s1[src], base))
                if v != e_next[src][l2]:
                    e_next[src][l2] = v
                    nxt.add((src, l2))
        e = e_next
        active = nxt
    out = []
    for l in range(n):
        acc = bottom
        row_dist = dist[l]
        row_e = e[l]
        for l2 in range(n):
            if dom.in_interval(row_dist[l2], d1, d2):
                acc = choose(acc, row_e[l2])
        out.append(acc)
    return SpatialSignal(tuple(out))


# ---------------------------------------------------------------------------
# the monitor itself


def monitor(ctx: MonitorContext, formula: Formula) -> SpatioTemporalSignal:
    """Evaluate a formula over the context's trace and dynamic model."""
    core = desugar(formula)
    validate_formula(ctx, core)
    cache: dict[Formula, SpatioTemporalSignal] = {}
    return _eval(ctx, core, cache)


def _eval(ctx: MonitorContext, node: Formula, cache: dict) -> SpatioTemporalSignal:
    hit = cache.get(node)
    if hit is not None:
        return hit
    result = _eval_node(ctx, node, cache)
    cache[node] = result
    return result


def _eval_node(ctx: MonitorContext, node: Formula, cache: dict) -> SpatioTemporalSignal:
    dom = ctx.domain
    if isinstance(node, Atomic):
        return SpatioTemporalSignal(
            tuple(_atom_signal(ctx, node, loc) for loc in range(ctx.trace.location_count))
        )
    if isinstance(node, Not):
        child = _eval(ctx, node.child, cache)
        return SpatioTemporalSignal(tuple(s.map_values(dom.negate) for s in child.signals))
    if isinstance(node, And):
        left = _eval(ctx, node.left, cache)
        right = _eval(ctx, node.right, cache)
        out = []
        for sl, sr in zip(left.signals, right.signals):
            sl, sr = _common_domain(sl, sr)
            times = sorted(set(sl.times) | set(sr.times))
            values = tuple(dom.combine(sl.value_at(t), sr.value_at(t)) for t in times)
            out.append(TemporalSignal(tuple(times), values, sl.end_time).minimize())
        return SpatioTemporalSignal(tuple(out))
    if isinstance(node, Until):
        left = _eval(ctx, node.left, cache)
        right = _eval(ctx, node.right, cache)
        return SpatioTemporalSignal(
            tuple(
                monitor_until(node.interval, sl, sr, dom)
                for sl, sr in zip(left.signals, right.signals)
            )
        )
    if isinstance(node, Since):
        left = _eval(ctx, node.left, cache)
        right = _eval(ctx, node.right, cache)
        return SpatioTemporalSignal(
            tuple(
                monitor_since(node.interval, sl, sr, dom)
                for sl, sr in zip(left.signals, right.signals)
            )
        )
    if isinstance(node, Reach):
        left = _eval(ctx, node.left, cache)
        right = _eval(ctx, node.right, cache)
        f = ctx.distances[node.distance]
        return _eval_spatial_binary(ctx, node.interval, f, left, right, _reach_at)
    if isinstance(node, Escape):
        child = _eval(ctx, node.child, cache)
        f = ctx.distances[node.distance]
        return _eval_spatial_binary(ctx, node.interval, f, child, None, _escape_at)
    raise SemanticError(f"cannot monitor non-core node {type(node).__name__}")


def _reach_at(ctx, interval, f, model, slice1, slice2):
    return reach(model, f, interval, slice1, slice2, ctx.domain)


def _escape_at(ctx, interval, f, model, slice1, _slice2):
    return escape(model, f, interval, slice1, ctx.domain)


def _eval_spatial_binary(ctx, interval, f, sig1, sig2, op):
    """Evaluate a spatial operator at every time the inputs or graph change."""
    if sig2 is not None:
        pairs = [
            _common_domain(sl, sr) for sl, sr in zip(sig1.signals, sig2.signals)
        ]
        sig1 = SpatioTemporalSignal(tuple(p[0] for p in pairs))
        sig2 = SpatioTemporalSignal(tuple(p[1] for p in pairs))
    start, end = sig1.start, sig1.end_time
    times = set(sig1.step_times())
    if sig2 is not None:
        times.update(sig2.step_times())
    for t in ctx.model.snapshot_times():
        if start <= t <= end:
            times.add(t)
    times.add(start)
    eval_times = sorted(times)
    per_time = []
    for t in eval_times:
        model = ctx.model.snapshot_at(t)
        slice1 = sig1.spatial_slice(t)
        slice2 = sig2.spatial_slice(t) if sig2 is not None else None
        per_time.append(op(ctx, interval, f, model, slice1, slice2))
    n = sig1.location_count
    out = []
    for loc in range(n):
        values = tuple(per_time[i][loc] for i in range(len(eval_times)))
        out.append(TemporalSignal(tuple(eval_times), values, end).minimize())
    return SpatioTemporalSignal(tuple(out))


def satisfied_locations(result: SpatioTemporalSignal, ctx: MonitorContext, t: float = 0.0) -> list[int]:
    """Locations whose verdict at t (or at the domain start if t precedes it)
    is positive/true."""
    probe = max(t, result.start)
    out = []
    for loc in range(result.location_count):
        v = result.value_at(loc, probe)
        if (v is True) or (v is not False and isinstance(v, (int, float)) and v > 0):
            out.append(loc)
    return out
