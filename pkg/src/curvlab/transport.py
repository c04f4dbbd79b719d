"""Exact Wasserstein-1 transport and Ollivier-Ricci curvature.

All arithmetic is exact rational: equal-mass measures reduce to an integer
assignment problem (Hungarian kernel), general rational idleness reduces to
integer min-cost flow after scaling to a common denominator.  Sharpness of
curvature values is an equality of rationals, so no tolerances appear
anywhere in this module.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np

from . import _kernels
from .errors import (
    BadIdleness,
    Disconnected,
    MuGraphNotCP,
    NoAntipole,
    NotAnEdge,
    NotBMSharp,
    NotFullLength,
    NotLipschitz,
    NotPerfectMatching,
    NotRegular,
    PreconditionUnmet,
    SamePair,
    WrongDistance,
)
from .graphs import DistanceOracle, Graph, common_neighbors, interval


@dataclass(frozen=True)
class Measure:
    """Probability measure on vertices with exact rational masses."""

    mass: tuple[tuple[int, Fraction], ...]

    @staticmethod
    def from_dict(masses: Mapping[int, Fraction]) -> "Measure":
        items = tuple(
            (int(v), Fraction(m)) for v, m in sorted(masses.items()) if m != 0
        )
        if any(m < 0 for _, m in items):
            raise ValueError("negative mass")
        if sum((m for _, m in items), Fraction(0)) != 1:
            raise ValueError("masses must sum to exactly 1")
        return Measure(items)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.mass)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.mass)

    def __call__(self, v: int) -> Fraction:
        for u, m in self.mass:
            if u == v:
                return m
        return Fraction(0)


def idle_measure(g: Graph, x: int, p: Fraction | int) -> Measure:
    """Mass p at x and (1-p)/deg(x) on each neighbour."""
    p = _as_fraction(p, "idleness")
    if not (0 <= p <= 1):
        raise BadIdleness(f"idleness {p} outside [0, 1]")
    masses: dict[int, Fraction] = {x: p}
    if p != 1:
        deg = g.degree(x)
        if deg == 0:
            raise BadIdleness("idleness < 1 at an isolated vertex")
        share = (1 - p) / deg
        for y in g.adjacency[x]:
            masses[y] = share
    return Measure.from_dict(masses)


def _as_fraction(value, what: str) -> Fraction:
    if isinstance(value, float):
        raise BadIdleness(f"{what} must be rational, got float {value!r}")
    return Fraction(value)


@dataclass(frozen=True)
class TransportPlan:
    """Sparse coupling with exact marginals."""

    entries: tuple[tuple[int, int, Fraction], ...]
    source: Measure
    target: Measure

    def __post_init__(self) -> None:
        row: dict[int, Fraction] = {}
        col: dict[int, Fraction] = {}
        for u, v, m in self.entries:
            if m <= 0:
                raise ValueError("plan entries must be positive")
            row[u] = row.get(u, Fraction(0)) + m
            col[v] = col.get(v, Fraction(0)) + m
        if row != {u: m for u, m in self.source.mass}:
            raise ValueError("row marginals do not match the source measure")
        if col != {v: m for v, m in self.target.mass}:
            raise ValueError("column marginals do not match the target measure")

    def cost(self, d: DistanceOracle) -> Fraction:
        total = Fraction(0)
        for u, v, m in self.entries:
            duv = d.d(u, v)
            if duv < 0:
                raise Disconnected(f"no path between {u} and {v}")
            total += m * duv
        return total

    def to_json(self) -> dict:
        return {
            "entries": [[u, v, str(m)] for u, v, m in self.entries],
        }


@dataclass(frozen=True)
class CurvatureValue:
    """Exact curvature with provenance of flavour and computation path."""

    value: Fraction
    flavour: str  # "kappa" | "kappa_p" | "kappa_lly"
    method: str  # "assignment" | "matching" | "product-formula"
    p: Optional[Fraction] = None


def wasserstein(
    d: DistanceOracle, m1: Measure, m2: Measure
) -> tuple[Fraction, TransportPlan]:
    """Exact W1 distance and an optimal plan attaining it.

    Equal-mass atomic measures are solved as an integer assignment problem;
    anything else goes through integer min-cost flow on the common
    denominator scaling.
    """
    if not d.is_connected:
        raise Disconnected("Wasserstein distance needs a connected graph")
    s1, s2 = m1.support, m2.support
    masses1 = [m for _, m in m1.mass]
    masses2 = [m for _, m in m2.mass]
    if (
        len(s1) == len(s2)
        and len(set(masses1)) == 1
        and len(set(masses2)) == 1
        and masses1[0] == masses2[0]
    ):
        return _wasserstein_assignment(d, m1, m2)
    return _wasserstein_flow(d, m1, m2)


def _wasserstein_assignment(
    d: DistanceOracle, m1: Measure, m2: Measure
) -> tuple[Fraction, TransportPlan]:
    s1, s2 = m1.support, m2.support
    unit = m1.mass[0][1]
    cost = np.empty((len(s1), len(s2)), dtype=np.int64)
    for i, u in enumerate(s1):
        for j, v in enumerate(s2):
            cost[i, j] = d.d(u, v)
    total, row_to_col = _kernels.hungarian(cost)
    value = unit * int(total)
    entries = tuple(
        (s1[i], s2[int(row_to_col[i])], unit) for i in range(len(s1))
    )
    return value, TransportPlan(entries=entries, source=m1, target=m2)


def _wasserstein_flow(
    d: DistanceOracle, m1: Measure, m2: Measure
) -> tuple[Fraction, TransportPlan]:
    denom = 1
    for _, m in m1.mass + m2.mass:
        denom = denom * m.denominator // _gcd(denom, m.denominator)
    supply = [int(m * denom) for _, m in m1.mass]
    demand = [int(m * denom) for _, m in m2.mass]
    s1, s2 = m1.support, m2.support
    cost = [[d.d(u, v) for v in s2] for u in s1]
    total, flow = _transportation(cost, supply, demand)
    entries = tuple(
        (s1[i], s2[j], Fraction(f, denom))
        for (i, j), f in sorted(flow.items())
        if f > 0
    )
    return Fraction(total, denom), TransportPlan(entries=entries, source=m1, target=m2)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _transportation(
    cost: list[list[int]], supply: list[int], demand: list[int]
) -> tuple[int, dict[tuple[int, int], int]]:
    """Integer transportation problem by successive shortest augmenting paths.

    Non-negative integer costs; exact optimum.  Node potentials keep reduced
    costs non-negative, so each augmentation is a plain Dijkstra run from
    the sources that still hold supply.  Reduced costs: forward arc (i, j)
    carries cost[i][j] + phi_s[i] - phi_t[j], the reverse arc (flow > 0) the
    negation; both stay >= 0 by the standard potential update.
    """
    ns, nt = len(supply), len(demand)
    assert sum(supply) == sum(demand)
    flow: dict[tuple[int, int], int] = {}
    phi_s = [0] * ns
    phi_t = [0] * nt
    remaining = sum(supply)
    supply = list(supply)
    demand = list(demand)
    NONE = -1
    while remaining > 0:
        big = None
        dist_s: list = [big] * ns
        dist_t: list = [big] * nt
        par_t = [NONE] * nt  # source we reached this sink from
        par_s = [NONE] * ns  # sink we reached this source from; NONE = root
        heap: list[tuple[int, int, int]] = []
        for i in range(ns):
            if supply[i] > 0:
                dist_s[i] = 0
                heapq.heappush(heap, (0, 0, i))
        while heap:
            dd, side, node = heapq.heappop(heap)
            if side == 0:
                if dist_s[node] is None or dd > dist_s[node]:
                    continue
                for j in range(nt):
                    rc = cost[node][j] + phi_s[node] - phi_t[j]
                    nd = dd + rc
                    if dist_t[j] is None or nd < dist_t[j]:
                        dist_t[j] = nd
                        par_t[j] = node
                        heapq.heappush(heap, (nd, 1, j))
            else:
                if dist_t[node] is None or dd > dist_t[node]:
                    continue
                for i in range(ns):
                    if flow.get((i, node), 0) > 0:
                        rc = -cost[i][node] + phi_t[node] - phi_s[i]
                        nd = dd + rc
                        if dist_s[i] is None or nd < dist_s[i]:
                            dist_s[i] = nd
                            par_s[i] = node
                            heapq.heappush(heap, (nd, 0, i))
        best_j = -1
        for j in range(nt):
            if demand[j] > 0 and dist_t[j] is not None:
                if best_j < 0 or dist_t[j] < dist_t[best_j]:
                    best_j = j
        if best_j < 0:
            raise Disconnected("transportation problem is infeasible")
        dstar = dist_t[best_j]
        # walk parents back to a root source, recording arcs on the path
        forward_arcs: list[tuple[int, int]] = []
        backward_arcs: list[tuple[int, int]] = []
        j = best_j
        while True:
            i = par_t[j]
            forward_arcs.append((i, j))
            if par_s[i] == NONE:
                root = i
                break
            j = par_s[i]
            backward_arcs.append((i, j))
        bottleneck = min(supply[root], demand[best_j])
        for arc in backward_arcs:
            bottleneck = min(bottleneck, flow[arc])
        for arc in forward_arcs:
            flow[arc] = flow.get(arc, 0) + bottleneck
        for arc in backward_arcs:
            flow[arc] -= bottleneck
            if flow[arc] == 0:
                del flow[arc]
        supply[root] -= bottleneck
        demand[best_j] -= bottleneck
        remaining -= bottleneck
        for i in range(ns):
            if dist_s[i] is not None:
                phi_s[i] += min(dist_s[i], dstar)
        for j in range(nt):
            if dist_t[j] is not None:
                phi_t[j] += min(dist_t[j], dstar)
    total = sum(cost[i][j] * f for (i, j), f in flow.items())
    return total, dict(flow)


def _require_regular(g: Graph) -> int:
    deg = g.is_regular()
    if deg is None:
        raise NotRegular("operation requires a regular graph")
    return deg


def kappa_p(
    g: Graph, d: DistanceOracle, x: int, y: int, p: Fraction | int
) -> CurvatureValue:
    """p-idleness Ollivier-Ricci curvature 1 - W1(mu_x^p, mu_y^p)/d(x,y)."""
    if x == y:
        raise SamePair("curvature needs two distinct vertices")
    _require_regular(g)
    p = _as_fraction(p, "idleness")
    if not (0 <= p <= 1):
        raise BadIdleness(f"idleness {p} outside [0, 1]")
    w1, _ = wasserstein(d, idle_measure(g, x, p), idle_measure(g, y, p))
    value = 1 - w1 / d.d(x, y)
    return CurvatureValue(value=value, flavour="kappa_p", method="assignment", p=p)


def kappa(
    g: Graph, d: DistanceOracle, x: int, y: int, try_matching: bool = True
) -> CurvatureValue:
    """The rescaled curvature (D+1)/D * kappa_{1/(D+1)}(x, y).

    For adjacent pairs the triangle-and-matching fast path is attempted
    first; the returned value records which route produced it.
    """
    if x == y:
        raise SamePair("curvature needs two distinct vertices")
    deg = _require_regular(g)
    if not d.is_connected:
        raise Disconnected("curvature needs a connected graph")
    if try_matching and d.d(x, y) == 1:
        fast = curvature_via_matching(g, d, x, y)
        if fast is not None:
            return fast
    p = Fraction(1, deg + 1)
    kp = kappa_p(g, d, x, y, p)
    value = Fraction(deg + 1, deg) * kp.value
    return CurvatureValue(value=value, flavour="kappa", method="assignment")


def kappa_lly(g: Graph, d: DistanceOracle, x: int, y: int) -> CurvatureValue:
    """Lin-Lu-Yau curvature for adjacent pairs of a regular graph.

    Exposed through the identity with the rescaled idleness-1/(D+1)
    curvature; only defined here for neighbours.
    """
    if d.d(x, y) != 1:
        raise NotAnEdge("kappa_LLY is exposed for adjacent pairs only")
    inner = kappa(g, d, x, y)
    return CurvatureValue(
        value=inner.value, flavour="kappa_lly", method=inner.method
    )


def scaled_product_curvature(
    factor_value: CurvatureValue, deg_factor: int, deg_total: int
) -> CurvatureValue:
    """Curvature of a product edge obtained from a factor edge curvature."""
    return CurvatureValue(
        value=Fraction(deg_factor, deg_total) * factor_value.value,
        flavour="kappa",
        method="product-formula",
    )


def matching_sides(
    g: Graph, x: int, y: int
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The two difference neighbourhoods N_x \\ (N_xy + {y}) and N_y \\ (N_xy + {x})."""
    nxy = common_neighbors(g, x, y)
    left = tuple(u for u in g.adjacency[x] if u not in nxy and u != y)
    right = tuple(v for v in g.adjacency[y] if v not in nxy and v != x)
    return left, right


def max_bipartite_matching(
    left: Sequence[int], right: Sequence[int], adj: Mapping[int, Sequence[int]]
) -> dict[int, int]:
    """Hopcroft-Karp maximum matching; returns a left -> right dict."""
    INF = float("inf")
    pair_l: dict[int, Optional[int]] = {u: None for u in left}
    pair_r: dict[int, Optional[int]] = {v: None for v in right}
    dist: dict[int, float] = {}

    def bfs() -> bool:
        queue = deque()
        for u in left:
            if pair_l[u] is None:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adj.get(u, ()):
                w = pair_r[v]
                if w is None:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in adj.get(u, ()):
            w = pair_r[v]
            if w is None or (dist[w] == dist[u] + 1 and dfs(w)):
                pair_l[u] = v
                pair_r[v] = u
                return True
        dist[u] = INF
        return False

    while bfs():
        for u in left:
            if pair_l[u] is None:
                dfs(u)
    return {u: v for u, v in pair_l.items() if v is not None}


def perfect_matching_between(
    g: Graph, left: Sequence[int], right: Sequence[int]
) -> Optional[dict[int, int]]:
    """A perfect adjacency matching between two disjoint vertex sets, if any."""
    if len(left) != len(right):
        return None
    rset = set(right)
    adj = {u: [v for v in g.adjacency[u] if v in rset] for u in left}
    matching = max_bipartite_matching(left, right, adj)
    if len(matching) == len(left):
        return matching
    return None


def unique_perfect_matching(
    g: Graph, left: Sequence[int], right: Sequence[int]
) -> Optional[dict[int, int]]:
    """The unique perfect matching between two sets, or None.

    Peels forced (degree-one) vertices; the peeling completes exactly when a
    perfect matching exists and is unique.  Returns None when no perfect
    matching exists or when more than one does.
    """
    if len(left) != len(right):
        return None
    rset = set(right)
    adj: dict[int, set[int]] = {u: {v for v in g.adjacency[u] if v in rset} for u in left}
    radj: dict[int, set[int]] = {v: set() for v in right}
    for u, vs in adj.items():
        for v in vs:
            radj[v].add(u)
    matching: dict[int, int] = {}
    active_l = set(left)
    active_r = set(right)
    while active_l:
        forced: Optional[tuple[int, int]] = None
        for u in active_l:
            if len(adj[u]) == 0:
                return None
            if len(adj[u]) == 1:
                forced = (u, next(iter(adj[u])))
                break
        if forced is None:
            for v in active_r:
                if len(radj[v]) == 0:
                    return None
                if len(radj[v]) == 1:
                    forced = (next(iter(radj[v])), v)
                    break
        if forced is None:
            return None  # every remaining vertex has >= 2 options: not unique
        u, v = forced
        matching[u] = v
        active_l.remove(u)
        active_r.remove(v)
        for w in adj[u]:
            radj[w].discard(u)
        for w in radj[v]:
            adj[w].discard(v)
        del adj[u]
        del radj[v]
    return matching


def curvature_via_matching(
    g: Graph, d: DistanceOracle, x: int, y: int
) -> Optional[CurvatureValue]:
    """(2 + m)/D when the triangle-and-matching certificate applies, else None."""
    deg = _require_regular(g)
    if d.d(x, y) != 1:
        raise NotAnEdge(f"({x},{y}) is not an edge")
    m = len(common_neighbors(g, x, y))
    left, right = matching_sides(g, x, y)
    if perfect_matching_between(g, left, right) is None:
        return None
    return CurvatureValue(
        value=Fraction(2 + m, deg), flavour="kappa", method="matching"
    )


def certify_duality(
    d: DistanceOracle,
    m1: Measure,
    m2: Measure,
    plan: TransportPlan,
    potential: Mapping[int, Fraction | int],
) -> bool:
    """True iff cost(plan) equals the potential's dual value exactly.

    The potential must be 1-Lipschitz on the support closure; by weak
    duality a True verdict certifies both the plan and the potential as
    optimal.
    """
    closure = sorted(
        set(m1.support) | set(m2.support) | {u for u, _, _ in plan.entries} | {v for _, v, _ in plan.entries}
    )
    for i, u in enumerate(closure):
        for v in closure[i + 1 :]:
            gap = potential[u] - potential[v]
            if abs(gap) > d.d(u, v):
                raise NotLipschitz(
                    f"|phi({u}) - phi({v})| = {abs(gap)} > d = {d.d(u, v)}"
                )
    dual = sum(
        (Fraction(potential[v]) * (m1(v) - m2(v)) for v in closure), Fraction(0)
    )
    return plan.cost(d) == dual


@dataclass(frozen=True)
class TransportMap:
    """A bijective transport map on 1-balls with its displacement record."""

    source: int
    target: int
    mapping: tuple[tuple[int, int], ...]
    cost: Fraction

    def apply(self, v: int) -> int:
        for u, w in self.mapping:
            if u == v:
                return w
        raise KeyError(v)

    def displacements(self, d: DistanceOracle) -> dict[int, int]:
        return {u: d.d(u, w) for u, w in self.mapping}


def tpm_transport_map(
    g: Graph,
    d: DistanceOracle,
    x: int,
    y: int,
    matching: Mapping[int, int],
) -> TransportMap:
    """Transport map based on triangles and a perfect matching along edge (x, y).

    Identity on the common neighbourhood and on {x, y}; matched difference
    neighbours move along their matching edge.  Cost is (D-1-m)/(D+1).
    """
    deg = _require_regular(g)
    if d.d(x, y) != 1:
        raise NotAnEdge(f"({x},{y}) is not an edge")
    left, right = matching_sides(g, x, y)
    if sorted(matching.keys()) != sorted(left) or sorted(matching.values()) != sorted(right):
        raise NotPerfectMatching("matching does not pair the difference neighbourhoods")
    for u, v in matching.items():
        if not g.has_edge(u, v):
            raise NotPerfectMatching(f"matched pair ({u},{v}) is not an edge")
    fixed = sorted(common_neighbors(g, x, y) | {x, y})
    mapping = tuple(
        [(u, u) for u in fixed] + sorted(matching.items())
    )
    cost = Fraction(len(left), deg + 1)
    return TransportMap(source=x, target=y, mapping=mapping, cost=cost)


def unique_tpm_transport_map(g: Graph, d: DistanceOracle, x: int, y: int) -> TransportMap:
    """The unique triangle-and-matching transport map along an edge.

    Raises NotBMSharp when the perfect matching is missing or ambiguous,
    which on a self-centered Bonnet-Myers sharp graph cannot happen.
    """
    left, right = matching_sides(g, x, y)
    matching = unique_perfect_matching(g, left, right)
    if matching is None:
        raise NotBMSharp(
            f"edge ({x},{y}): no uniquely determined perfect matching"
        )
    return tpm_transport_map(g, d, x, y, matching)


@dataclass(frozen=True)
class TransportGeodesic:
    """Waypoints of a vertex pushed along a full-length geodesic."""

    base: tuple[int, ...]
    waypoints: tuple[int, ...]
    length: int


def transport_geodesic(
    g: Graph, d: DistanceOracle, geodesic: Sequence[int], z: int
) -> TransportGeodesic:
    """Push z through the concatenated unique transport maps along a geodesic.

    The geodesic must have full length diam(G); z must lie in the 1-ball of
    its start.  Each step map is the unique triangle-and-matching map of the
    corresponding edge.
    """
    path = tuple(geodesic)
    L = d.diameter
    if len(path) != L + 1:
        raise NotFullLength(
            f"geodesic has {len(path) - 1} edges, diameter is {L}"
        )
    for a, b in zip(path, path[1:]):
        if not g.has_edge(a, b):
            raise NotFullLength(f"({a},{b}) along the path is not an edge")
    if d.d(path[0], path[-1]) != L:
        raise NotFullLength("vertex sequence is not a geodesic")
    if d.d(path[0], z) > 1:
        raise PreconditionUnmet(f"{z} is not in the 1-ball of {path[0]}")
    waypoints = [z]
    for a, b in zip(path, path[1:]):
        t = unique_tpm_transport_map(g, d, a, b)
        waypoints.append(t.apply(waypoints[-1]))
    total_steps = sum(d.d(u, v) for u, v in zip(waypoints, waypoints[1:]))
    length = d.d(waypoints[0], waypoints[-1])
    if total_steps != length:
        raise NotBMSharp("waypoints do not lie on a common geodesic")
    return TransportGeodesic(base=path, waypoints=tuple(waypoints), length=length)


def geodesic_between(
    g: Graph, d: DistanceOracle, x: int, y: int, via: Sequence[int] = ()
) -> tuple[int, ...]:
    """Some geodesic from x to y passing through the (ordered) via vertices."""
    stops = [x, *via, y]
    total = sum(d.d(a, b) for a, b in zip(stops, stops[1:]))
    if total != d.d(x, y):
        raise PreconditionUnmet("via vertices do not lie on a common geodesic")
    path = [x]
    for a, b in zip(stops, stops[1:]):
        cur = a
        while cur != b:
            cur = next(
                w for w in g.adjacency[cur] if d.d(w, b) == d.d(cur, b) - 1
            )
            path.append(cur)
    return tuple(path)


def interval_antipole(
    g: Graph, d: DistanceOracle, x: int, y: int, x1: int
) -> int:
    """The unique z in [x, y] with d(x1, z) = d(x, y), for x1 a neighbour of x
    inside the interval.

    Computed twice: by pushing x along the transport maps of a full-length
    geodesic through x1 and y, and by brute-force scan of the interval; the
    two must agree.
    """
    k = d.d(x, y)
    if k < 1:
        raise SamePair("interval antipole needs distinct endpoints")
    iv = interval(d, x, y)
    if x1 not in iv or d.d(x, x1) != 1:
        raise PreconditionUnmet(f"{x1} is not in [x,y] and adjacent to {x}")
    brute = [z for z in sorted(iv) if d.d(x1, z) == k]
    if len(brute) != 1:
        raise NoAntipole(
            f"interval [{x},{y}] carries {len(brute)} antipole candidates for {x1}"
        )
    L = d.diameter
    far = [w for w in range(g.n) if d.d(x, w) == L and d.d(x1, w) == L - 1 and d.d(y, w) == L - k]
    if not far:
        raise NoAntipole(f"no full-length geodesic extends [{x},{y}] through {x1}")
    path = geodesic_between(g, d, x, far[0], via=(x1, y))
    tg = transport_geodesic(g, d, path, x)
    candidate = tg.waypoints[k]
    if candidate != brute[0]:
        raise NoAntipole(
            f"transport antipole {candidate} disagrees with brute force {brute[0]}"
        )
    return candidate


def switching_map(g: Graph, d: DistanceOracle, x: int, y: int) -> dict[int, int]:
    """The involution pairing each common neighbour of a distance-2 pair with
    its unique non-neighbour inside the mu-graph."""
    if d.d(x, y) != 2:
        raise WrongDistance(f"d({x},{y}) = {d.d(x, y)} != 2")
    members = sorted(common_neighbors(g, x, y))
    member_set = set(members)
    sigma: dict[int, int] = {}
    for z in members:
        non_nbrs = member_set - {z} - set(g.adjacency[z])
        if len(non_nbrs) != 1:
            raise MuGraphNotCP(
                f"mu-graph of ({x},{y}) is not a cocktail party graph at {z}"
            )
        sigma[z] = next(iter(non_nbrs))
    for z, w in sigma.items():
        if sigma[w] != z:
            raise MuGraphNotCP(f"switching map not involutive at {z}")
    return sigma
