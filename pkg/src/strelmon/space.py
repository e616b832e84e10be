"""Weighted directed graphs, their time evolution, and route distances.

Locations are integer ids 0..n-1.  Edge weights are either scalars or 2d
vectors (for models embedded in the plane).  Undirected graphs are encoded as
two opposite edges.  A distance function maps edge weights into a distance
domain; route distances are the monoid sum of the mapped weights, and the
distance between two locations is the choose-minimum over all routes.
"""

from __future__ import annotations

import heapq
import json
import math
from bisect import bisect_right
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .algebra import DistanceDomain, hop_distance_domain, real_distance_domain

Weight = Any  # float or (float, float)


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class SpatialModel:
    location_count: int
    edges: tuple[tuple[int, Weight, int], ...]

    def __post_init__(self):
        if self.location_count <= 0:
            raise ModelError("location_count must be positive")
        seen: set[tuple[int, int]] = set()
        for src, _w, dst in self.edges:
            if not (0 <= src < self.location_count and 0 <= dst < self.location_count):
                raise ModelError(f"edge ({src}, {dst}) out of range for {self.location_count} locations")
            if src == dst:
                raise ModelError(f"self-loop at location {src} is not allowed")
            if (src, dst) in seen:
                raise ModelError(f"duplicate edge for ordered pair ({src}, {dst})")
            seen.add((src, dst))

    @cached_property
    def in_edges(self) -> tuple[tuple[tuple[int, Weight], ...], ...]:
        """Per location, the (source, weight) pairs of incoming edges."""
        acc: list[list[tuple[int, Weight]]] = [[] for _ in range(self.location_count)]
        for src, w, dst in self.edges:
            acc[dst].append((src, w))
        return tuple(tuple(lst) for lst in acc)

    @cached_property
    def out_edges(self) -> tuple[tuple[tuple[int, Weight], ...], ...]:
        acc: list[list[tuple[int, Weight]]] = [[] for _ in range(self.location_count)]
        for src, w, dst in self.edges:
            acc[src].append((dst, w))
        return tuple(tuple(lst) for lst in acc)

    @cached_property
    def weight_map(self) -> dict[tuple[int, int], Weight]:
        return {(src, dst): w for src, w, dst in self.edges}

    def weight(self, src: int, dst: int) -> Weight:
        try:
            return self.weight_map[(src, dst)]
        except KeyError:
            raise ModelError(f"no edge from {src} to {dst}") from None


def build_spatial_model(n: int, edges: Iterable[tuple[int, Weight, int]]) -> SpatialModel:
    return SpatialModel(n, tuple((src, w, dst) for src, w, dst in edges))


def undirected_model(n: int, edges: Iterable[tuple[int, Weight, int]]) -> SpatialModel:
    """Expand each listed edge to both directions."""
    out = []
    for src, w, dst in edges:
        out.append((src, w, dst))
        out.append((dst, w, src))
    return SpatialModel(n, tuple(out))


@dataclass(frozen=True)
class DynamicalSpatialModel:
    """Piecewise-constant graph evolution: the snapshot at time t is the
    latest one with time <= t."""

    snapshots: tuple[tuple[float, SpatialModel], ...]

    def __post_init__(self):
        if not self.snapshots:
            raise ModelError("need at least one snapshot")
        times = [t for t, _ in self.snapshots]
        for a, b in zip(times, times[1:]):
            if not a < b:
                raise ModelError(f"snapshot times must strictly increase, got {a} then {b}")
        counts = {m.location_count for _, m in self.snapshots}
        if len(counts) != 1:
            raise ModelError(f"snapshots disagree on location count: {sorted(counts)}")

    @classmethod
    def static(cls, model: SpatialModel, start: float = 0.0) -> "DynamicalSpatialModel":
        return cls(((start, model),))

    @property
    def location_count(self) -> int:
        return self.snapshots[0][1].location_count

    @property
    def start(self) -> float:
        return self.snapshots[0][0]

    def snapshot_times(self) -> list[float]:
        return [t for t, _ in self.snapshots]

    def snapshot_at(self, t: float) -> SpatialModel:
        if t < self.snapshots[0][0]:
            raise ModelError(f"time {t} precedes first snapshot at {self.snapshots[0][0]}")
        idx = bisect_right([tt for tt, _ in self.snapshots], t) - 1
        return self.snapshots[idx][1]


def snapshot_at(dm: DynamicalSpatialModel, t: float) -> SpatialModel:
    return dm.snapshot_at(t)


@dataclass(frozen=True)
class DistanceFunction:
    """Maps edge weights into a distance domain; must be strictly positive."""

    name: str
    map: Callable[[Weight], Any]
    domain: DistanceDomain


def hop_distance() -> DistanceFunction:
    return DistanceFunction("hop", lambda w: 1, hop_distance_domain())


def weight_sum_distance() -> DistanceFunction:
    def as_scalar(w: Weight) -> float:
        if isinstance(w, (int, float)):
            return float(w)
        raise ModelError(f"weight-sum distance needs scalar edge weights, got {w!r}")

    return DistanceFunction("weight", as_scalar, real_distance_domain())


def euclidean_norm_distance() -> DistanceFunction:
    def norm(w: Weight) -> float:
        if isinstance(w, tuple) and len(w) == 2:
            return math.hypot(w[0], w[1])
        raise ModelError(f"euclidean distance needs 2d vector edge weights, got {w!r}")

    return DistanceFunction("euclid", norm, real_distance_domain())


BUILTIN_DISTANCES = {
    "hop": hop_distance,
    "weight": weight_sum_distance,
    "euclid": euclidean_norm_distance,
}


def check_strictly_positive(model: SpatialModel, f: DistanceFunction) -> None:
    for src, w, dst in model.edges:
        if not f.domain.is_positive(f.map(w)):
            raise ModelError(
                f"distance function {f.name!r} is not strictly positive on edge "
                f"({src}, {dst}) with weight {w!r}"
            )


def route_prefix_distance(model: SpatialModel, f: DistanceFunction, path: Sequence[int], i: int) -> Any:
    """Accumulated distance of the first i steps of a path along edges."""
    if not 0 <= i < len(path) or len(path) == 0:
        raise ModelError(f"prefix index {i} out of range for path of length {len(path)}")
    dom = f.domain
    d = dom.zero
    for k in range(i):
        w = model.weight(path[k], path[k + 1])
        d = dom.add(d, f.map(w))
    return d


class _HeapKey:
    """Wraps a distance value so heapq can order by the domain's total order."""

    __slots__ = ("value", "leq")

    def __init__(self, value: Any, leq: Callable[[Any, Any], bool]):
        self.value = value
        self.leq = leq

    def __lt__(self, other: "_HeapKey") -> bool:
        return self.leq(self.value, other.value) and self.value != other.value


def min_distance_matrix(model: SpatialModel, f: DistanceFunction) -> list[list[Any]]:
    """All-pairs minimum route distance: one generalized Dijkstra per source.

    Entry [i][j] is the choose-minimum accumulated distance over routes from
    i to j, zero on the diagonal, infinity for unreachable pairs.  Requires a
    strictly positive distance function (monotone accumulation makes the
    greedy settling order correct).
    """
    check_strictly_positive(model, f)
    dom = f.domain
    n = model.location_count
    out = model.out_edges
    mapped = [[(dst, f.map(w)) for dst, w in out[src]] for src in range(n)]
    matrix: list[list[Any]] = []
    for source in range(n):
        dist: list[Any] = [dom.infinity] * n
        dist[source] = dom.zero
        done = [False] * n
        heap: list[tuple[_HeapKey, int]] = [(_HeapKey(dom.zero, dom.leq), source)]
        while heap:
            key, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            for v, step in mapped[u]:
                cand = dom.add(key.value, step)
                if dom.lt(cand, dist[v]):
                    dist[v] = cand
                    heapq.heappush(heap, (_HeapKey(cand, dom.leq), v))
        matrix.append(dist)
    return matrix


@dataclass(frozen=True)
class EuclideanPositions:
    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        for i, (x, y) in enumerate(self.points):
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ModelError(f"position of location {i} is not finite: ({x}, {y})")

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, loc: int) -> tuple[float, float]:
        return self.points[loc]


def euclidean_model(pos: EuclideanPositions, relation: Iterable[tuple[int, int]]) -> SpatialModel:
    """Edges carry the 2d difference vector between the endpoint positions."""
    n = len(pos)
    edges = []
    for a, b in relation:
        ax, ay = pos[a]
        bx, by = pos[b]
        edges.append((a, (ax - bx, ay - by), b))
    return SpatialModel(n, tuple(edges))


def _all_collinear(pts: np.ndarray) -> bool:
    if len(pts) < 3:
        return True
    base = pts[0]
    for i in range(1, len(pts)):
        d = pts[i] - base
        if d @ d > 0:
            direction = d
            break
    else:
        return True
    cross = (pts[:, 0] - base[0]) * direction[1] - (pts[:, 1] - base[1]) * direction[0]
    return bool(np.all(np.abs(cross) == 0.0))


def delaunay_proximity(pos: EuclideanPositions) -> set[tuple[int, int]]:
    """Symmetric Delaunay-triangulation relation over the positions.

    Degenerate inputs are handled deterministically: exactly collinear point
    sets become the chain of consecutive neighbours along the line, and
    cocircular ties are broken by a tiny index-scaled perturbation of the
    coordinates before triangulating, so repeated runs agree bit for bit.
    """
    n = len(pos)
    if n < 2:
        return set()
    if n == 2:
        return {(0, 1), (1, 0)}
    pts = np.asarray(pos.points, dtype=float)
    if _all_collinear(pts):
        base = pts[0]
        direction = None
        for i in range(1, n):
            d = pts[i] - base
            if d @ d > 0:
                direction = d
                break
        if direction is None:
            # all points coincide; perturbation below separates them
            direction = np.array([1.0, 0.0])
        order = np.argsort(pts @ direction, kind="stable")
        rel: set[tuple[int, int]] = set()
        for a, b in zip(order, order[1:]):
            rel.add((int(a), int(b)))
            rel.add((int(b), int(a)))
        return rel

    from scipy.spatial import Delaunay, QhullError

    extent = float(np.max(np.ptp(pts, axis=0)))
    eps = 1e-9 * (extent if extent > 0 else 1.0)
    angles = 2.399963229728653 * np.arange(n)  # golden angle spreads directions
    jitter = eps * (np.arange(n) + 1)[:, None] * np.stack([np.cos(angles), np.sin(angles)], axis=1)
    try:
        tri = Delaunay(pts + jitter)
    except QhullError as exc:
        raise ModelError(f"triangulation failed: {exc}") from None
    rel = set()
    for simplex in tri.simplices:
        for i in range(3):
            a, b = int(simplex[i]), int(simplex[(i + 1) % 3])
            rel.add((a, b))
            rel.add((b, a))
    return rel


def connectivity_graph(pos: EuclideanPositions, radius: float) -> set[tuple[int, int]]:
    """Pairs within the communication radius, boundary inclusive."""
    if radius < 0:
        raise ModelError("radius must be nonnegative")
    n = len(pos)
    rel: set[tuple[int, int]] = set()
    for i in range(n):
        xi, yi = pos[i]
        for j in range(i + 1, n):
            xj, yj = pos[j]
            if math.hypot(xi - xj, yi - yj) <= radius:
                rel.add((i, j))
                rel.add((j, i))
    return rel


def _weight_to_json(w: Weight):
    if isinstance(w, tuple):
        return [w[0], w[1]]
    return w


def _weight_from_json(w) -> Weight:
    if isinstance(w, list):
        if len(w) != 2:
            raise ModelError(f"vector weight must have two components, got {w!r}")
        return (float(w[0]), float(w[1]))
    return float(w)


def save_model(dm: DynamicalSpatialModel, path: str) -> None:
    doc = {
        "locations": dm.location_count,
        "snapshots": [
            {
                "time": t,
                "edges": [[src, dst, _weight_to_json(w)] for src, w, dst in m.edges],
            }
            for t, m in dm.snapshots
        ],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_model(path: str) -> DynamicalSpatialModel:
    """Read the dynamic-model JSON: {"locations": n, "snapshots": [...]}.

    Each snapshot lists edges as [src, dst, weight] with weight a number or a
    two-element array; "undirected": true expands every edge to both
    directions.
    """
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "locations" not in doc or "snapshots" not in doc:
        raise ModelError(f"{path}: expected an object with 'locations' and 'snapshots'")
    n = doc["locations"]
    undirected = bool(doc.get("undirected", False))
    snapshots = []
    for snap in doc["snapshots"]:
        edges = []
        for entry in snap.get("edges", []):
            if len(entry) != 3:
                raise ModelError(f"{path}: edge entry must be [src, dst, weight], got {entry!r}")
            src, dst, w = entry
            edges.append((int(src), _weight_from_json(w), int(dst)))
        model = undirected_model(n, edges) if undirected else build_spatial_model(n, edges)
        snapshots.append((float(snap["time"]), model))
    return DynamicalSpatialModel(tuple(snapshots))
