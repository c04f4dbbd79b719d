"""Independent oracles and generators used across the test suite.

These deliberately avoid the code paths they check: Wasserstein by
exhaustive bijection enumeration, intervals by definition scan, random
regular graphs by stub pairing.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations

from curvlab.graphs import DistanceOracle, Graph, build_graph
from curvlab.transport import Measure


def wasserstein_bruteforce(d: DistanceOracle, m1: Measure, m2: Measure) -> Fraction:
    """Minimum cost over all bijections of equal-mass atomic supports.

    For equal atomic masses the transportation polytope's vertices are
    exactly the bijections, so this enumeration is exhaustive.
    """
    s1, s2 = m1.support, m2.support
    masses = {m for _, m in m1.mass} | {m for _, m in m2.mass}
    assert len(masses) == 1 and len(s1) == len(s2), "oracle needs equal atomic masses"
    unit = next(iter(masses))
    best = min(
        sum(d.d(u, v) for u, v in zip(s1, perm)) for perm in permutations(s2)
    )
    return unit * best


def interval_bruteforce(d: DistanceOracle, x: int, y: int) -> frozenset[int]:
    n = d.dist.shape[0]
    dxy = d.d(x, y)
    return frozenset(
        z for z in range(n) if d.d(x, z) >= 0 and d.d(x, z) + d.d(z, y) == dxy
    )


def assignment_bruteforce(cost) -> int:
    n = len(cost)
    return min(
        sum(cost[i][perm[i]] for i in range(n)) for perm in permutations(range(n))
    )


def random_regular_graph(n: int, deg: int, rng: random.Random) -> Graph:
    """Simple connected deg-regular graph: circulant start + edge swaps.

    Double-edge swaps preserve the degree sequence and simplicity; the walk
    re-randomizes until a connected sample comes out.
    """
    assert (n * deg) % 2 == 0 and deg < n and deg >= 2
    from curvlab.graphs import distances

    half = deg // 2
    edges = set()
    for v in range(n):
        for step in range(1, half + 1):
            edges.add(tuple(sorted((v, (v + step) % n))))
        if deg % 2 == 1:
            edges.add(tuple(sorted((v, (v + n // 2) % n))))

    def swap_once() -> None:
        (a, b), (c, d) = rng.sample(sorted(edges), 2)
        if rng.random() < 0.5:
            c, d = d, c
        if len({a, b, c, d}) < 4:
            return
        new1, new2 = tuple(sorted((a, c))), tuple(sorted((b, d)))
        if new1 in edges or new2 in edges:
            return
        edges.discard((a, b) if a < b else (b, a))
        edges.discard((c, d) if c < d else (d, c))
        edges.add(new1)
        edges.add(new2)

    for _ in range(20 * len(edges)):
        swap_once()
    while True:
        g = build_graph(n, sorted(edges))
        if distances(g).is_connected:
            return g
        for _ in range(2 * len(edges)):
            swap_once()
