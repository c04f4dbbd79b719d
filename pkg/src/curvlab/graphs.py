"""Core graph representation and metric structure.

Vertices are dense integers ``0..n-1``; optional string labels carry
generator provenance but never enter any algorithm.  Graphs are immutable
and hashable; the distance oracle is a dense int32 matrix with ``-1``
marking unreachable pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels
from .errors import (
    Disconnected,
    DuplicateEdge,
    EmptySphere,
    NotAnEdge,
    SelfLoop,
    VertexOutOfRange,
    WrongDistance,
)


@dataclass(frozen=True)
class Graph:
    """Immutable simple undirected graph given by sorted adjacency lists."""

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    labels: Optional[tuple[str, ...]] = None

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(nbrs) for nbrs in self.adjacency)

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in _neighbor_sets(self)[u]

    def is_regular(self) -> Optional[int]:
        """The common degree if the graph is regular, else None."""
        degs = self.degrees
        if self.n == 0 or len(set(degs)) != 1:
            return None
        return degs[0]

    def neighbor_set(self, v: int) -> frozenset[int]:
        return _neighbor_sets(self)[v]

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        return _csr(self)

    def relabel(self, labels: Sequence[str] | None) -> "Graph":
        return Graph(self.n, self.adjacency, tuple(labels) if labels is not None else None)


@lru_cache(maxsize=512)
def _csr(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    indptr = np.zeros(g.n + 1, dtype=np.int32)
    for v in range(g.n):
        indptr[v + 1] = indptr[v] + len(g.adjacency[v])
    indices = np.fromiter(
        (w for nbrs in g.adjacency for w in nbrs), dtype=np.int32, count=int(indptr[-1])
    )
    return indptr, indices


@lru_cache(maxsize=512)
def _neighbor_sets(g: Graph) -> tuple[frozenset[int], ...]:
    return tuple(frozenset(nbrs) for nbrs in g.adjacency)


def build_graph(
    n: int,
    edges: Iterable[tuple[int, int]],
    labels: Sequence[str] | None = None,
) -> Graph:
    """Validate an edge list and build a Graph.

    Rejects self-loops, duplicate edges (in either orientation) and
    endpoints outside ``[0, n)``.
    """
    if n < 0:
        raise VertexOutOfRange(f"negative vertex count {n}")
    seen: set[tuple[int, int]] = set()
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise VertexOutOfRange(f"edge ({u},{v}) outside [0,{n})")
        if u == v:
            raise SelfLoop(f"self-loop at {u}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise DuplicateEdge(f"duplicate edge {key}")
        seen.add(key)
        adj[u].append(v)
        adj[v].append(u)
    if labels is not None and len(labels) != n:
        raise VertexOutOfRange("label count does not match vertex count")
    return Graph(
        n,
        tuple(tuple(sorted(nbrs)) for nbrs in adj),
        tuple(labels) if labels is not None else None,
    )


@dataclass(frozen=True, eq=False)
class DistanceOracle:
    """All-pairs BFS distances; ``dist[x, y] == -1`` means unreachable."""

    dist: np.ndarray
    diameter: int
    is_connected: bool

    def d(self, x: int, y: int) -> int:
        return int(self.dist[x, y])

    def eccentricity(self, x: int) -> int:
        return int(self.dist[x].max())

    def sphere(self, x: int, k: int) -> tuple[int, ...]:
        return tuple(int(v) for v in np.flatnonzero(self.dist[x] == k))

    def ball(self, x: int, k: int) -> tuple[int, ...]:
        row = self.dist[x]
        return tuple(int(v) for v in np.flatnonzero((row >= 0) & (row <= k)))


def distances(g: Graph) -> DistanceOracle:
    indptr, indices = g.csr()
    dist = _kernels.bfs_all_pairs(indptr, indices, g.n)
    connected = bool((dist >= 0).all()) if g.n > 0 else True
    diameter = int(dist.max()) if g.n > 0 else 0
    return DistanceOracle(dist=dist, diameter=diameter, is_connected=connected)


def interval(d: DistanceOracle, x: int, y: int) -> frozenset[int]:
    """All vertices on geodesics from x to y."""
    dxy = d.d(x, y)
    if dxy < 0:
        return frozenset()
    members = _kernels.interval_members(d.dist[x], d.dist[y], dxy)
    return frozenset(int(v) for v in members)


@dataclass(frozen=True)
class DegreeTriple:
    """In, spherical and out degree of y as seen from x."""

    d_minus: int
    d_zero: int
    d_plus: int


def degree_triple(g: Graph, d: DistanceOracle, x: int, y: int) -> DegreeTriple:
    dxy = d.d(x, y)
    minus = zero = plus = 0
    for z in g.adjacency[y]:
        dxz = d.d(x, z)
        if dxz == dxy - 1:
            minus += 1
        elif dxz == dxy:
            zero += 1
        elif dxz == dxy + 1:
            plus += 1
    return DegreeTriple(minus, zero, plus)


def sphere_averages(
    g: Graph, d: DistanceOracle, x: int, k: int
) -> tuple[Fraction, Fraction, Fraction]:
    """Exact mean (in, spherical, out) degrees over the k-sphere of x."""
    sphere = d.sphere(x, k)
    if not sphere:
        raise EmptySphere(f"S_{k}({x}) is empty")
    tm = tz = tp = 0
    for y in sphere:
        t = degree_triple(g, d, x, y)
        tm += t.d_minus
        tz += t.d_zero
        tp += t.d_plus
    m = len(sphere)
    return Fraction(tm, m), Fraction(tz, m), Fraction(tp, m)


def triangle_count_edge(g: Graph, x: int, y: int) -> int:
    nbrs = _neighbor_sets(g)
    if y not in nbrs[x]:
        raise NotAnEdge(f"({x},{y}) is not an edge")
    return len(nbrs[x] & nbrs[y])


def triangle_count_vertex(g: Graph, x: int) -> int:
    total = sum(triangle_count_edge(g, x, y) for y in g.adjacency[x])
    if total % 2 != 0:
        raise AssertionError("edge/vertex triangle double counting violated")
    return total // 2


def common_neighbors(g: Graph, x: int, y: int) -> frozenset[int]:
    nbrs = _neighbor_sets(g)
    return nbrs[x] & nbrs[y]


def induced_subgraph(g: Graph, vertices: Sequence[int]) -> tuple[Graph, tuple[int, ...]]:
    """Induced subgraph plus the tuple mapping new ids to original ids."""
    verts = tuple(sorted(set(vertices)))
    pos = {v: i for i, v in enumerate(verts)}
    edges = [
        (pos[u], pos[w])
        for u in verts
        for w in g.adjacency[u]
        if w in pos and u < w
    ]
    sub = build_graph(len(verts), edges, labels=tuple(str(v) for v in verts))
    return sub, verts


def mu_graph(g: Graph, d: DistanceOracle, x: int, z: int) -> Graph:
    """Induced subgraph on the common neighbours of a distance-2 pair."""
    if d.d(x, z) != 2:
        raise WrongDistance(f"d({x},{z}) = {d.d(x, z)} != 2")
    sub, _ = induced_subgraph(g, sorted(common_neighbors(g, x, z)))
    return sub


def is_cocktail_party(g: Graph) -> Optional[int]:
    """m such that g is CP(m): 2m vertices, each with a unique non-neighbour.

    CP(1), two isolated vertices, is accepted.
    """
    if g.n == 0 or g.n % 2 != 0:
        return None
    m = g.n // 2
    want_degree = 2 * m - 2
    if any(g.degree(v) != want_degree for v in range(g.n)):
        return None
    partner = [-1] * g.n
    for v in range(g.n):
        others = set(range(g.n)) - {v} - set(g.adjacency[v])
        if len(others) != 1:
            return None
        partner[v] = next(iter(others))
    if any(partner[partner[v]] != v for v in range(g.n)):
        return None
    return m


@dataclass(frozen=True)
class SrgParams:
    """Strongly regular parameters; ``lam is None`` is the wildcard for edgeless graphs."""

    nu: int
    k: int
    lam: Optional[int]
    mu: int


def is_strongly_regular(g: Graph) -> Optional[SrgParams]:
    """Detect strong regularity; complete graphs are excluded by convention.

    A set of n isolated points counts as (n, 0, *, 0) with wildcard lambda.
    """
    n = g.n
    if n == 0:
        return None
    k = g.is_regular()
    if k is None:
        return None
    if k == n - 1:
        return None  # complete graph
    if k == 0:
        return SrgParams(n, 0, None, 0)
    nbrs = _neighbor_sets(g)
    lam: Optional[int] = None
    mu: Optional[int] = None
    for x in range(n):
        for y in range(x + 1, n):
            c = len(nbrs[x] & nbrs[y])
            if y in nbrs[x]:
                if lam is None:
                    lam = c
                elif lam != c:
                    return None
            else:
                if mu is None:
                    mu = c
                elif mu != c:
                    return None
    if lam is None or mu is None:
        return None
    return SrgParams(n, k, lam, mu)


def intersection_array(
    g: Graph, d: DistanceOracle
) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """((b_0..b_{L-1}), (c_1..c_L)) when g is distance-regular, else None."""
    if not d.is_connected or g.is_regular() is None:
        return None
    L = d.diameter
    b = [-1] * L
    c = [-1] * (L + 1)
    b[0] = g.is_regular()  # type: ignore[assignment]
    for x in range(g.n):
        for y in range(g.n):
            j = d.d(x, y)
            if j < 1:
                continue
            t = degree_triple(g, d, x, y)
            if c[j] == -1:
                c[j] = t.d_minus
            elif c[j] != t.d_minus:
                return None
            if j < L:
                if b[j] == -1:
                    b[j] = t.d_plus
                elif b[j] != t.d_plus:
                    return None
            elif t.d_plus != 0:
                return None
    if any(v == -1 for v in b) or any(v == -1 for v in c[1:]):
        return None
    return tuple(b), tuple(c[1:])


def cartesian_product(g1: Graph, g2: Graph, verify: bool = True) -> Graph:
    """Cartesian product; vertex (u, v) maps to index u * g2.n + v.

    Degree additivity always holds; diameter additivity is checked when both
    factors are connected.
    """
    n1, n2 = g1.n, g2.n
    edges: list[tuple[int, int]] = []
    for u in range(n1):
        for v in range(n2):
            base = u * n2 + v
            for w in g2.adjacency[v]:
                if v < w:
                    edges.append((base, u * n2 + w))
            for w in g1.adjacency[u]:
                if u < w:
                    edges.append((base, w * n2 + v))
    labels = None
    if g1.labels is not None and g2.labels is not None:
        labels = tuple(
            f"({g1.labels[u]},{g2.labels[v]})" for u in range(n1) for v in range(n2)
        )
    prod = build_graph(n1 * n2, edges, labels=labels)
    if verify and n1 > 0 and n2 > 0:
        d1, d2, dp = distances(g1), distances(g2), distances(prod)
        if d1.is_connected and d2.is_connected:
            if dp.diameter != d1.diameter + d2.diameter:
                raise AssertionError("product diameter is not additive")
    return prod


def poles_and_antipoles(
    g: Graph, d: DistanceOracle
) -> tuple[tuple[tuple[int, ...], ...], bool]:
    """Per-vertex antipole lists {y : d(x,y) = diam} and the self-centered flag."""
    if not d.is_connected:
        raise Disconnected("antipoles need a connected graph")
    L = d.diameter
    per_vertex = tuple(d.sphere(x, L) for x in range(g.n))
    self_centered = all(len(a) > 0 for a in per_vertex)
    return per_vertex, self_centered


def complement(g: Graph) -> Graph:
    edges = [
        (u, v)
        for u in range(g.n)
        for v in range(u + 1, g.n)
        if v not in _neighbor_sets(g)[u]
    ]
    return build_graph(g.n, edges, labels=g.labels)
