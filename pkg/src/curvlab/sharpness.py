"""Sharpness and classification predicates.

Everything here is decided in exact rational arithmetic; floats appear only
in strongly-regular eigenvalue side checks.  The verdict dataclasses carry
the witnesses needed to audit a failure.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Optional

import numpy as np

from . import _kernels
from .errors import (
    Disconnected,
    DisconnectedSubset,
    NotAPole,
    NotRegular,
    PreconditionUnmet,
)
from .families import FamilySpec, from_spec
from .graphs import (
    DistanceOracle,
    Graph,
    degree_triple,
    distances,
    induced_subgraph,
    interval,
    is_cocktail_party,
    is_strongly_regular,
    mu_graph,
    poles_and_antipoles,
    triangle_count_edge,
)
from .isomorphism import find_isomorphism
from .spectral import adjacency_spectrum
from .transport import (
    kappa,
    matching_sides,
    perfect_matching_between,
    tpm_transport_map,
    idle_measure,
    wasserstein,
)


def _require_connected_regular(g: Graph, d: DistanceOracle) -> int:
    if not d.is_connected:
        raise Disconnected("predicate needs a connected graph")
    deg = g.is_regular()
    if deg is None:
        raise NotRegular("predicate needs a regular graph")
    return deg


@dataclass(frozen=True)
class SharpnessVerdict:
    inf_edge_kappa: Fraction
    two_over_l: Fraction
    is_bm_sharp: bool
    l_le_d: bool
    l_divides_2d: bool
    witness_edge: tuple[int, int]


def bm_sharpness(g: Graph, d: DistanceOracle) -> SharpnessVerdict:
    """Exact infimum of edge curvature compared against 2/diameter."""
    deg = _require_connected_regular(g, d)
    best: Optional[Fraction] = None
    witness = (-1, -1)
    for u, v in g.edges():
        val = kappa(g, d, u, v).value
        if best is None or val < best:
            best = val
            witness = (u, v)
    assert best is not None
    L = d.diameter
    two_over_l = Fraction(2, L)
    return SharpnessVerdict(
        inf_edge_kappa=best,
        two_over_l=two_over_l,
        is_bm_sharp=(best == two_over_l),
        l_le_d=(L <= deg),
        l_divides_2d=((2 * deg) % L == 0),
        witness_edge=witness,
    )


@dataclass(frozen=True)
class LambdaVerdict:
    m: int
    holds: bool
    failing_edges: tuple[tuple[int, int], ...]


def lambda_m_check(g: Graph, d: DistanceOracle, m: int) -> LambdaVerdict:
    """Every edge lies in at least m triangles and the remaining
    neighbourhoods admit a perfect adjacency matching."""
    if g.is_regular() is None:
        raise NotRegular("Lambda(m) is stated for regular graphs")
    failing = []
    for u, v in g.edges():
        if triangle_count_edge(g, u, v) < m:
            failing.append((u, v))
            continue
        left, right = matching_sides(g, u, v)
        if perfect_matching_between(g, left, right) is None:
            failing.append((u, v))
    return LambdaVerdict(m=m, holds=not failing, failing_edges=tuple(failing))


@dataclass(frozen=True)
class PoleFacts:
    triangles_ok: bool
    matching_ok: bool
    cost_ok: bool
    expected_triangles: Fraction
    expected_cost: Fraction
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.triangles_ok and self.matching_ok and self.cost_ok


def pole_facts(g: Graph, d: DistanceOracle, x: int) -> PoleFacts:
    """Triangle count, matching and optimal transport cost facts at a pole."""
    deg = _require_connected_regular(g, d)
    L = d.diameter
    if d.eccentricity(x) != L:
        raise NotAPole(f"vertex {x} has eccentricity {d.eccentricity(x)} < {L}")
    want_tri = Fraction(2 * deg, L) - 2
    want_cost = Fraction(deg + 1 - Fraction(2 * deg, L), deg + 1)
    failures: list[str] = []
    tri_ok = match_ok = cost_ok = True
    for y in g.adjacency[x]:
        if triangle_count_edge(g, x, y) != want_tri:
            tri_ok = False
            failures.append(f"edge ({x},{y}) lies in {triangle_count_edge(g, x, y)} triangles")
            continue
        left, right = matching_sides(g, x, y)
        matching = perfect_matching_between(g, left, right)
        if matching is None:
            match_ok = False
            failures.append(f"edge ({x},{y}) has no perfect matching")
            continue
        plan_cost = tpm_transport_map(g, d, x, y, matching).cost
        p = Fraction(1, deg + 1)
        w1, _ = wasserstein(d, idle_measure(g, x, p), idle_measure(g, y, p))
        if plan_cost != want_cost or w1 != want_cost:
            cost_ok = False
            failures.append(
                f"edge ({x},{y}) cost {plan_cost}, W1 {w1}, expected {want_cost}"
            )
    return PoleFacts(
        triangles_ok=tri_ok,
        matching_ok=match_ok,
        cost_ok=cost_ok,
        expected_triangles=want_tri,
        expected_cost=want_cost,
        failures=tuple(failures),
    )


@dataclass(frozen=True)
class RecursionVerdict:
    holds: bool
    failure: Optional[tuple[int, int, str]]  # (k, vertex, which identity)


def degree_recursions(g: Graph, d: DistanceOracle, x: int) -> RecursionVerdict:
    """The three in/out/spherical degree identities on every sphere of a pole."""
    deg = _require_connected_regular(g, d)
    L = d.diameter
    if d.eccentricity(x) != L:
        raise NotAPole(f"vertex {x} is not a pole")
    for k in range(1, L + 1):
        for y in d.sphere(x, k):
            t = degree_triple(g, d, x, y)
            if t.d_plus - t.d_minus != deg * (1 - Fraction(2 * k, L)):
                return RecursionVerdict(False, (k, y, "out-minus-in"))
            if 2 * t.d_plus + t.d_zero != 2 * deg * (1 - Fraction(k, L)):
                return RecursionVerdict(False, (k, y, "out-spherical"))
            if 2 * t.d_minus + t.d_zero != Fraction(2 * k * deg, L):
                return RecursionVerdict(False, (k, y, "in-spherical"))
    return RecursionVerdict(True, None)


@dataclass(frozen=True)
class CoverVerdict:
    holds: bool
    failure: Optional[tuple[int, int]]


def interval_cover_check(g: Graph, d: DistanceOracle) -> CoverVerdict:
    """Every antipole pair's interval covers the whole vertex set."""
    per_vertex, _ = poles_and_antipoles(g, d)
    for x in range(g.n):
        for y in per_vertex[x]:
            if x < y and len(interval(d, x, y)) != g.n:
                return CoverVerdict(False, (x, y))
    return CoverVerdict(True, None)


@dataclass(frozen=True)
class AntipoleCountVerdict:
    holds: bool
    exactly_one_each: bool
    failure: Optional[int]


def unique_antipole_check(g: Graph, d: DistanceOracle) -> AntipoleCountVerdict:
    """At most one antipole per vertex; exactly one when self-centered."""
    per_vertex, self_centered = poles_and_antipoles(g, d)
    for x, antipoles in enumerate(per_vertex):
        if len(antipoles) > 1:
            return AntipoleCountVerdict(False, False, x)
    exactly_one = self_centered and all(len(a) == 1 for a in per_vertex)
    return AntipoleCountVerdict(True, exactly_one, None)


def is_antipodal(g: Graph, d: DistanceOracle, subset: frozenset[int] | set[int]) -> bool:
    """Antipodality of the induced subgraph on ``subset`` in its own metric."""
    members = np.array(sorted(subset), dtype=np.int32)
    indptr, indices = g.csr()
    dm = _kernels.induced_distances(indptr, indices, members, g.n)
    if (dm < 0).any():
        raise DisconnectedSubset("subset does not induce a connected subgraph")
    return bool(_kernels.is_antipodal_matrix(dm))


@dataclass(frozen=True)
class SphericalVerdict:
    holds: bool
    failure: Optional[tuple[int, int]]  # first interval whose subgraph fails
    mode: str


def is_strongly_spherical(
    g: Graph, d: DistanceOracle, mode: str = "induced"
) -> SphericalVerdict:
    """The graph and all its intervals are antipodal.

    ``mode="induced"`` (the contract) measures each interval with the metric
    of its induced subgraph; ``mode="ambient"`` is an exploratory variant
    using restricted ambient distances.
    """
    if not d.is_connected:
        raise Disconnected("strong sphericity needs a connected graph")
    if mode not in ("induced", "ambient"):
        raise ValueError(f"unknown mode {mode!r}")
    indptr, indices = g.csr()
    if not _kernels.is_antipodal_matrix(d.dist):
        return SphericalVerdict(False, None, mode)
    for x in range(g.n):
        for y in range(x + 1, g.n):
            members = _kernels.interval_members(d.dist[x], d.dist[y], d.d(x, y))
            if members.shape[0] == g.n:
                continue  # the full graph was already checked
            if mode == "induced":
                dm = _kernels.induced_distances(indptr, indices, members, g.n)
                if (dm < 0).any():
                    return SphericalVerdict(False, (x, y), mode)
            else:
                dm = d.dist[np.ix_(members, members)]
            if not _kernels.is_antipodal_matrix(dm):
                return SphericalVerdict(False, (x, y), mode)
    return SphericalVerdict(True, None, mode)


@dataclass(frozen=True)
class MuGraphVerdict:
    holds: bool
    m_values: tuple[tuple[int, int], ...]  # (m, count), sorted
    failure: Optional[tuple[int, int]]


def mu_graphs_all_cp(g: Graph, d: DistanceOracle) -> MuGraphVerdict:
    """Every distance-2 pair's mu-graph is a cocktail party graph."""
    if not d.is_connected:
        raise Disconnected("mu-graph scan needs a connected graph")
    counts: Counter[int] = Counter()
    for x in range(g.n):
        for y in range(x + 1, g.n):
            if d.d(x, y) != 2:
                continue
            m = is_cocktail_party(mu_graph(g, d, x, y))
            if m is None:
                return MuGraphVerdict(False, tuple(sorted(counts.items())), (x, y))
            counts[m] += 1
    return MuGraphVerdict(True, tuple(sorted(counts.items())), None)


@dataclass(frozen=True)
class LocalSrgVerdict:
    holds: bool
    params: tuple[int, Fraction, Fraction, Fraction]
    theta: Fraction
    failure: Optional[int]


def local_srg_check(g: Graph, d: DistanceOracle) -> LocalSrgVerdict:
    """Every induced 1-sphere matches the predicted strongly regular
    parameters and second adjacency eigenvalue.

    Preconditions: self-centered Bonnet-Myers sharp with uniform cocktail
    party mu-graphs of the predicted size.
    """
    deg = _require_connected_regular(g, d)
    L = d.diameter
    if L < 2:
        raise PreconditionUnmet("local srg structure needs diameter >= 2")
    verdict = bm_sharpness(g, d)
    _, self_centered = poles_and_antipoles(g, d)
    if not (verdict.is_bm_sharp and self_centered):
        raise PreconditionUnmet("graph is not self-centered Bonnet-Myers sharp")
    want_m = Fraction(deg - L, L * (L - 1)) + 1
    mu_verdict = mu_graphs_all_cp(g, d)
    if not mu_verdict.holds or [m for m, _ in mu_verdict.m_values] != [want_m]:
        raise PreconditionUnmet(
            f"mu-graphs are not uniformly CP({want_m}): {mu_verdict.m_values}"
        )
    nu = deg
    k = Fraction(2 * deg, L) - 2
    lam = Fraction(deg - 1, L - 1) - 3
    mu = Fraction(2 * (deg - L), L * (L - 1))
    theta = Fraction((deg - L) * (L - 2), L * (L - 1))
    for x in range(g.n):
        sphere, _ = induced_subgraph(g, g.adjacency[x])
        params = is_strongly_regular(sphere)
        if params is None:
            return LocalSrgVerdict(False, (nu, k, lam, mu), theta, x)
        got_lam = params.lam if params.lam is not None else lam  # wildcard
        if (params.nu, params.k, got_lam, params.mu) != (nu, k, lam, mu):
            return LocalSrgVerdict(False, (nu, k, lam, mu), theta, x)
        spec_sorted = adjacency_spectrum(sphere)
        if abs(float(spec_sorted[1]) - float(theta)) > 1e-9:
            return LocalSrgVerdict(False, (nu, k, lam, mu), theta, x)
    return LocalSrgVerdict(True, (nu, k, lam, mu), theta, None)


def ssp_ncp(g: Graph, d: DistanceOracle, x: int) -> tuple[bool, bool]:
    """(small sphere property, non-clustering property) at x."""
    deg = g.is_regular()
    if deg is None:
        raise NotRegular("SSP/NCP are stated for regular graphs")
    s2 = d.sphere(x, 2)
    ssp = len(s2) <= comb(deg, 2)
    ncp = True
    if s2 and all(degree_triple(g, d, x, z).d_minus == 2 for z in s2):
        s1 = g.adjacency[x]
        for y1, y2 in combinations(s1, 2):
            joint = sum(
                1 for z in s2 if g.has_edge(y1, z) and g.has_edge(y2, z)
            )
            if joint > 1:
                ncp = False
                break
    return ssp, ncp


@dataclass(frozen=True)
class FourCycleVerdict:
    holds: bool
    checked_edges: int
    violations: tuple[tuple[int, int, int], ...]  # (x, y, w) path not in a 4-cycle


def four_cycle_lemma_check(g: Graph, d: DistanceOracle) -> FourCycleVerdict:
    """For triangle-free edges with curvature >= 2/D, every adjacent edge
    pair extends to a 4-cycle."""
    deg = _require_connected_regular(g, d)
    threshold = Fraction(2, deg)
    checked = 0
    violations: list[tuple[int, int, int]] = []
    for x, y in g.edges():
        if triangle_count_edge(g, x, y) != 0:
            continue
        if kappa(g, d, x, y).value < threshold:
            continue
        checked += 1
        for a, b in ((x, y), (y, x)):
            for w in g.adjacency[a]:
                if w == b:
                    continue
                if not any(g.has_edge(u, w) for u in g.adjacency[b] if u != a):
                    violations.append((a, b, w))
    return FourCycleVerdict(not violations, checked, tuple(violations))


# -- classification -----------------------------------------------------------

@dataclass(frozen=True)
class ClassificationMatch:
    matched: Optional[FamilySpec]
    iso_witness: Optional[tuple[int, ...]]
    reason: str


def _list_base_specs(max_vertices: int) -> list[tuple[FamilySpec, int, int, int]]:
    """(spec, |V|, D, L) of classification-list members up to a vertex cap."""
    out: list[tuple[FamilySpec, int, int, int]] = []
    n = 1
    while 2**n <= max_vertices:
        out.append((FamilySpec("hypercube", (n,)), 2**n, n, n))
        n += 1
    n = 3
    while 2 * n <= max_vertices:
        out.append((FamilySpec("cocktailparty", (n,)), 2 * n, 2 * n - 2, 2))
        n += 1
    n = 3
    while comb(2 * n, n) <= max_vertices:
        out.append((FamilySpec("johnson", (2 * n, n)), comb(2 * n, n), n * n, n))
        n += 1
    n = 3
    while 2 ** (2 * n - 1) <= max_vertices:
        out.append(
            (FamilySpec("demicube", (2 * n,)), 2 ** (2 * n - 1), n * (2 * n - 1), n)
        )
        n += 1
    if 56 <= max_vertices:
        out.append((FamilySpec("gosset", ()), 56, 27, 3))
    return out


def _factorizations(
    n: int, deg: int, diam: int, ratio: Fraction, bases: list[tuple[FamilySpec, int, int, int]]
) -> list[tuple[FamilySpec, ...]]:
    """Multisets of list members with matching product invariants."""
    usable = [
        b for b in bases if Fraction(b[2], b[3]) == ratio and n % b[1] == 0
    ]
    results: list[tuple[FamilySpec, ...]] = []

    def rec(idx: int, rem_n: int, rem_d: int, rem_l: int, chosen: list[FamilySpec]) -> None:
        if rem_n == 1:
            if rem_d == 0 and rem_l == 0 and chosen:
                results.append(tuple(chosen))
            return
        for i in range(idx, len(usable)):
            spec, bn, bd, bl = usable[i]
            if rem_n % bn == 0 and bd <= rem_d and bl <= rem_l:
                chosen.append(spec)
                rec(i, rem_n // bn, rem_d - bd, rem_l - bl, chosen)
                chosen.pop()

    rec(0, n, deg, diam, [])
    return results


def classify(g: Graph, d: DistanceOracle) -> ClassificationMatch:
    """Match a self-centered Bonnet-Myers sharp graph against the known list
    (the five families and their equal-ratio Cartesian products), confirming
    by explicit isomorphism."""
    deg = _require_connected_regular(g, d)
    _, self_centered = poles_and_antipoles(g, d)
    if not self_centered:
        return ClassificationMatch(None, None, "not self-centered")
    verdict = bm_sharpness(g, d)
    if not verdict.is_bm_sharp:
        return ClassificationMatch(
            None,
            None,
            f"not Bonnet-Myers sharp (inf kappa {verdict.inf_edge_kappa} != {verdict.two_over_l})",
        )
    L = d.diameter
    bases = _list_base_specs(g.n)
    ratio = Fraction(deg, L)
    candidates: list[FamilySpec] = []
    for spec, bn, bd, bl in bases:
        if (bn, bd, bl) == (g.n, deg, L):
            candidates.append(spec)
    for combo in _factorizations(g.n, deg, L, ratio, bases):
        if len(combo) >= 2:
            candidates.append(FamilySpec("product", factors=combo))
    if not candidates:
        return ClassificationMatch(None, None, "no list member matches (|V|, D, L)")
    for spec in candidates:
        witness = find_isomorphism(from_spec(spec), g)
        if witness is not None:
            return ClassificationMatch(spec, witness, "matched")
    return ClassificationMatch(None, None, "invariants matched but no isomorphism found")
