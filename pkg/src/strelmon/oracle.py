"""Brute-force reference semantics for small instances.

Everything here re-derives verdicts straight from the defining equations,
using deliberately naive machinery: temporal operators by a dense double
loop over event grids, bounded reach by exhaustive enumeration of route
prefixes, unbounded reach by a memoized recursion over the remaining lower
bound plus a dense fixpoint, escape by simple-path enumeration gated with a
Floyd-Warshall distance matrix.  None of the production algorithms (event
sweeps, flooding, back-propagation, generalized Dijkstra) are used, so
agreement between ``oracle_monitor`` and ``monitor`` is meaningful evidence.

Instances are capped at 8 locations and 6 distinct trace steps; the point is
trust, not speed.
"""

from __future__ import annotations

from typing import Any

from .algebra import SignalDomain
from .logic import And, Atomic, Escape, Formula, Not, Reach, Since, Until, desugar
from .monitor import MonitorContext, SemanticError, _atom_signal, validate_formula
from .signals import SpatioTemporalSignal, TemporalSignal
from .space import SpatialModel

MAX_LOCATIONS = 8
MAX_STEPS = 6


class OracleLimitError(ValueError):
    pass


def oracle_monitor(
    ctx: MonitorContext,
    formula: Formula,
    max_locations: int = MAX_LOCATIONS,
    max_steps: int = MAX_STEPS,
) -> SpatioTemporalSignal:
    if ctx.trace.location_count > max_locations:
        raise OracleLimitError(
            f"oracle accepts at most {max_locations} locations, got {ctx.trace.location_count}"
        )
    if len(ctx.trace.step_times()) > max_steps:
        raise OracleLimitError(
            f"oracle accepts at most {max_steps} trace steps, got {len(ctx.trace.step_times())}"
        )
    core = desugar(formula)
    validate_formula(ctx, core)
    times, values, end = _eval(ctx, core)
    signals = tuple(
        TemporalSignal(tuple(times), tuple(values[loc]), end)
        for loc in range(ctx.trace.location_count)
    )
    return SpatioTemporalSignal(signals)


def _value_at(times: list[float], row: list[Any], t: float) -> Any:
    # linear scan; grids are tiny by construction
    idx = 0
    for i, tt in enumerate(times):
        if tt <= t:
            idx = i
        else:
            break
    return row[idx]


def _eval(ctx: MonitorContext, node: Formula) -> tuple[list[float], list[list[Any]], float]:
    """Returns (grid times, per-location values on the grid, end time)."""
    dom = ctx.domain
    n = ctx.trace.location_count
    if isinstance(node, Atomic):
        base = sorted(set(ctx.trace.step_times()) | {
            t for t in ctx.model.snapshot_times() if ctx.trace.start <= t <= ctx.trace.end_time
        })
        sigs = [_atom_signal(ctx, node, loc) for loc in range(n)]
        values = [[sig.value_at(t) for t in base] for sig in sigs]
        return base, values, ctx.trace.end_time
    if isinstance(node, Not):
        times, values, end = _eval(ctx, node.child)
        return times, [[dom.negate(v) for v in row] for row in values], end
    if isinstance(node, And):
        t1, v1, e1 = _eval(ctx, node.left)
        t2, v2, e2 = _eval(ctx, node.right)
        start = max(t1[0], t2[0])
        end = min(e1, e2)
        if start > end:
            raise SemanticError("empty common time domain")
        times = sorted({t for t in set(t1) | set(t2) | {start} if start <= t <= end})
        values = [
            [
                dom.combine(_value_at(t1, v1[loc], t), _value_at(t2, v2[loc], t))
                for t in times
            ]
            for loc in range(n)
        ]
        return times, values, end
    if isinstance(node, (Until, Since)):
        t1, v1, e1 = _eval(ctx, node.left)
        t2, v2, e2 = _eval(ctx, node.right)
        start = max(t1[0], t2[0])
        end = min(e1, e2)
        if start > end:
            raise SemanticError("empty common time domain")
        base = sorted({t for t in set(t1) | set(t2) | {start} if start <= t <= end})
        r1 = [[_value_at(t1, v1[loc], t) for t in base] for loc in range(n)]
        r2 = [[_value_at(t2, v2[loc], t) for t in base] for loc in range(n)]
        lo = node.interval.lo
        hi = node.interval.hi
        if isinstance(node, Until):
            out_end = (end - hi) if hi is not None else (end - lo)
            out_start = start
        else:
            out_end = end
            out_start = start + (hi if hi is not None else lo)
        if out_start > out_end:
            raise SemanticError("temporal interval exceeds the trace horizon")
        grid = {out_start, out_end}
        for t in base:
            for shift in (0.0, lo) + ((hi,) if hi is not None else ()):
                for cand in (t - shift, t + shift):
                    if out_start <= cand <= out_end:
                        grid.add(cand)
        times = sorted(grid)
        values = []
        for loc in range(n):
            row = []
            for t in times:
                if isinstance(node, Until):
                    w_lo = t + lo
                    w_hi = (t + hi) if hi is not None else end
                    row.append(
                        _window_value(dom, base, r1[loc], r2[loc], t, w_lo, w_hi, future=True)
                    )
                else:
                    w_hi = t - lo
                    w_lo = (t - hi) if hi is not None else start
                    row.append(
                        _window_value(dom, base, r1[loc], r2[loc], t, w_lo, w_hi, future=False)
                    )
            values.append(row)
        return times, values, out_end if isinstance(node, Until) else end
    if isinstance(node, Reach):
        return _eval_spatial(ctx, node, binary=True)
    if isinstance(node, Escape):
        return _eval_spatial(ctx, node, binary=False)
    raise SemanticError(f"oracle cannot evaluate non-core node {type(node).__name__}")


def _window_value(dom, base, row1, row2, t, w_lo, w_hi, future: bool) -> Any:
    """Direct evaluation of the until/since equation at a single time."""
    samples = {w_lo, w_hi}
    for s in base:
        if w_lo <= s <= w_hi:
            samples.add(s)
    acc = dom.bottom
    for tp in sorted(samples):
        span_lo, span_hi = (t, tp) if future else (tp, t)
        inner = {span_lo, span_hi}
        for s in base:
            if span_lo <= s <= span_hi:
                inner.add(s)
        prod = dom.top
        for u in inner:
            prod = dom.combine(prod, _value_at(base, row1, u))
        acc = dom.choose(acc, dom.combine(_value_at(base, row2, tp), prod))
    return acc


def _eval_spatial(ctx: MonitorContext, node, binary: bool):
    dom = ctx.domain
    n = ctx.trace.location_count
    if binary:
        t1, v1, e1 = _eval(ctx, node.left)
        t2, v2, e2 = _eval(ctx, node.right)
        start = max(t1[0], t2[0])
        end = min(e1, e2)
        if start > end:
            raise SemanticError("empty common time domain")
        times = sorted(
            {t for t in set(t1) | set(t2) | {start} if start <= t <= end}
            | {t for t in ctx.model.snapshot_times() if start <= t <= end}
        )
    else:
        t1, v1, e1 = _eval(ctx, node.child)
        start, end = t1[0], e1
        times = sorted(
            set(t1) | {t for t in ctx.model.snapshot_times() if start <= t <= end}
        )
    f = ctx.distances[node.distance]
    bdom = f.domain
    lo = node.interval.lo
    hi = bdom.infinity if node.interval.hi is None else node.interval.hi
    values: list[list[Any]] = [[] for _ in range(n)]
    for t in times:
        model = ctx.model.snapshot_at(t)
        s1 = [_value_at(t1, v1[loc], t) for loc in range(n)]
        if binary:
            s2 = [_value_at(t2, v2[loc], t) for loc in range(n)]
            if hi != bdom.infinity:
                out = [walk_reach(model, f, lo, hi, s1, s2, dom, loc) for loc in range(n)]
            else:
                out = dense_unbounded_reach(model, f, lo, s1, s2, dom)
        else:
            out = simple_path_escape(model, f, lo, hi, s1, dom)
        for loc in range(n):
            values[loc].append(out[loc])
    return times, values, end


def walk_reach(model: SpatialModel, f, d1, d2, s1, s2, dom: SignalDomain, start: int) -> Any:
    """Exhaustive route-prefix enumeration, pruned at accumulated distance d2.

    Strict positivity of f makes the enumeration finite: distances only grow
    along a prefix, so anything beyond d2 can never contribute.
    """
    bdom = f.domain
    out_edges = model.out_edges
    acc = dom.bottom

    def visit(loc: int, dist, prefix) -> None:
        nonlocal acc
        if bdom.in_interval(dist, d1, d2):
            acc = dom.choose(acc, dom.combine(s2[loc], prefix))
        prefix2 = dom.combine(prefix, s1[loc])
        if prefix2 == dom.bottom:
            return
        for dst, w in out_edges[loc]:
            nd = bdom.add(dist, f.map(w))
            if bdom.leq(nd, d2):
                visit(dst, nd, prefix2)

    visit(start, bdom.zero, dom.top)
    return acc


def dense_unbounded_reach(model: SpatialModel, f, d1, s1, s2, dom: SignalDomain) -> list:
    """Lower-bounded reach by recursion on the remaining distance budget.

    V is the least fixpoint of the unconstrained equation
    V(l) = s2(l) choose (choose over out-edges of s1(l) combine V(dst)),
    computed by dense iteration.  U(l, need) demands the route cross the
    remaining bound `need` before contributions start; distance values of the
    shipped domains are numbers, so the budget decreases by plain arithmetic.
    """
    bdom = f.domain
    n = model.location_count
    out_edges = model.out_edges
    v = list(s2)
    while True:
        nxt = []
        for l in range(n):
            val = s2[l]
            for dst, w in out_edges[l]:
                val = dom.choose(val, dom.combine(s1[l], v[dst]))
            nxt.append(val)
        if nxt == v:
            break
        v = nxt
    if d1 == bdom.zero:
        return v

    memo: dict[tuple[int, Any], Any] = {}

    def unbounded(loc: int, need) -> Any:
        if bdom.leq(need, bdom.zero):
            return v[loc]
        key = (loc, need)
        if key in memo:
            return memo[key]
        memo[key] = dom.bottom  # cycles re-entered with the same budget add nothing new
        acc = dom.bottom
        for dst, w in out_edges[loc]:
            step = f.map(w)
            acc = dom.choose(acc, dom.combine(s1[loc], unbounded(dst, need - step)))
        memo[key] = acc
        return acc

    return [unbounded(l, d1) for l in range(n)]


def floyd_warshall(model: SpatialModel, f) -> list[list[Any]]:
    bdom = f.domain
    n = model.location_count
    dist = [[bdom.infinity] * n for _ in range(n)]
    for i in range(n):
        dist[i][i] = bdom.zero
    for src, w, dst in model.edges:
        dist[src][dst] = bdom.min(dist[src][dst], f.map(w))
    for k in range(n):
        for i in range(n):
            dik = dist[i][k]
            if dik == bdom.infinity:
                continue
            for j in range(n):
                cand = bdom.add(dik, dist[k][j])
                if bdom.lt(cand, dist[i][j]):
                    dist[i][j] = cand
    return dist


def simple_path_escape(model: SpatialModel, f, d1, d2, s1, dom: SignalDomain) -> list:
    """Escape by enumerating simple paths.

    Revisiting a location only adds combine-factors, so under the idempotent
    shipped domains simple paths realize the best value for every endpoint;
    the endpoint is admitted when its minimum graph distance from the start
    lies in the interval.
    """
    bdom = f.domain
    dist = floyd_warshall(model, f)
    n = model.location_count
    out_edges = model.out_edges
    results = []
    for start in range(n):
        acc = dom.bottom
        admitted = [bdom.in_interval(dist[start][l], d1, d2) for l in range(n)]

        def visit(loc: int, product, visited: set) -> None:
            nonlocal acc
            if admitted[loc]:
                acc = dom.choose(acc, product)
            for dst, _w in out_edges[loc]:
                if dst not in visited:
                    visit(dst, dom.combine(product, s1[dst]), visited | {dst})

        visit(start, s1[start], {start})
        results.append(acc)
    return results
