"""Bakry-Emery Gamma-calculus and normalized infinity-curvature.

The curvature at x is the best constant K with Gamma2(f)(x) >= K Gamma(f)(x)
for all f.  Both quadratic forms live on the 2-ball of x; fixing f(x) = 0
(both forms are shift invariant) and eliminating the 2-sphere coordinates by
a Schur complement reduces the problem to a smallest eigenvalue on the
1-sphere coordinates.  A positive-semidefiniteness bisection provides an
independent cross-check.

Form matrices are floats assembled from exact rational Laplacian entries;
sharpness verdicts use a 1e-7 tolerance.  The upper bound
(3 + D - av_1^+(x)) / (2D) = 2/D + #triangles(x)/D^2 is exact rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

import numpy as np

from .errors import Disconnected, NotRegular
from .graphs import (
    DistanceOracle,
    Graph,
    distances,
    sphere_averages,
    triangle_count_vertex,
)
from .spectral import normalized_laplacian_apply

SHARP_TOL = 1e-7
# Slack for "is this matrix PSD"; must stay well below SHARP_TOL because an
# overshoot in the bisection scales like PSD_TOL divided by the Gamma-mass of
# the critical direction.
PSD_TOL = 1e-11


# -- exact pointwise evaluators ----------------------------------------------

def gamma_value(g: Graph, f: Mapping[int, Fraction], h: Mapping[int, Fraction], w: int) -> Fraction:
    """Gamma(f, h)(w) = (1/2d_w) sum_{z ~ w} (f(z)-f(w)) (h(z)-h(w)), exact."""
    deg = g.degree(w)
    acc = Fraction(0)
    fw, hw = Fraction(f[w]), Fraction(h[w])
    for z in g.adjacency[w]:
        acc += (Fraction(f[z]) - fw) * (Fraction(h[z]) - hw)
    return acc / (2 * deg)


def gamma2_value(g: Graph, f: Mapping[int, Fraction], h: Mapping[int, Fraction], x: int) -> Fraction:
    """Gamma2(f, h)(x) by the iterated definition, exact."""
    df = normalized_laplacian_apply(g, f)
    dh = normalized_laplacian_apply(g, h)
    gam = {w: gamma_value(g, f, h, w) for w in range(g.n)}
    dgam = normalized_laplacian_apply(g, gam)
    return (dgam[x] - gamma_value(g, f, dh, x) - gamma_value(g, h, df, x)) / 2


# -- form matrices ------------------------------------------------------------

@dataclass(frozen=True)
class QuadraticForm:
    """A symmetric form f |-> f^T matrix f over the listed vertex basis."""

    basis: tuple[int, ...]
    matrix: np.ndarray


def _laplacian_matrix(g: Graph) -> np.ndarray:
    m = np.zeros((g.n, g.n), dtype=np.float64)
    for x in range(g.n):
        deg = g.degree(x)
        m[x, x] = -1.0
        for y in g.adjacency[x]:
            m[x, y] = 1.0 / deg
    return m


def _gamma_matrix_at(g: Graph, w: int) -> np.ndarray:
    """Matrix of the bilinear form (f, h) -> Gamma(f, h)(w) on all vertices."""
    n = g.n
    h = np.zeros((n, n), dtype=np.float64)
    nbrs = list(g.adjacency[w])
    for z in nbrs:
        h[z, z] += 1.0
        h[z, w] -= 1.0
        h[w, z] -= 1.0
        h[w, w] += 1.0
    return h / (2.0 * g.degree(w))


def _gamma2_matrix_at(g: Graph, x: int) -> np.ndarray:
    lap = _laplacian_matrix(g)
    gx = _gamma_matrix_at(g, x)
    acc = -1.0 * gx  # M[x, x] = -1 term of Delta Gamma
    degx = g.degree(x)
    for y in g.adjacency[x]:
        acc = acc + _gamma_matrix_at(g, y) / degx
    b = 0.5 * (acc - gx @ lap - lap.T @ gx)
    return 0.5 * (b + b.T)


def _ball_partition(g: Graph, x: int) -> tuple[list[int], list[int]]:
    """(1-sphere, 2-sphere) of x via a local BFS."""
    s1 = sorted(g.adjacency[x])
    seen = set(s1) | {x}
    s2 = sorted({z for y in s1 for z in g.adjacency[y] if z not in seen})
    return s1, s2


def gamma_forms(g: Graph, x: int) -> tuple[QuadraticForm, QuadraticForm]:
    """The Gamma form on B1(x) and the Gamma2 form on B2(x) at x."""
    s1, s2 = _ball_partition(g, x)
    basis1 = tuple([x] + s1)
    basis2 = tuple([x] + s1 + s2)
    gx = _gamma_matrix_at(g, x)
    g2x = _gamma2_matrix_at(g, x)
    idx1 = np.array(basis1)
    idx2 = np.array(basis2)
    # Both forms vanish outside their stated balls.
    mask = np.ones(g.n, dtype=bool)
    mask[list(basis2)] = False
    if mask.any():
        outside = np.abs(g2x[mask]).max()
        if outside > 1e-9:
            raise AssertionError("Gamma2 form leaks outside the 2-ball")
    return (
        QuadraticForm(basis=basis1, matrix=gx[np.ix_(idx1, idx1)]),
        QuadraticForm(basis=basis2, matrix=g2x[np.ix_(idx2, idx2)]),
    )


# -- curvature ----------------------------------------------------------------

@dataclass(frozen=True)
class BEReport:
    vertex: int
    curvature: float
    upper_bound: Optional[Fraction]
    is_sharp: bool
    s1_out_regular: bool
    s1pp_lambda1: Optional[float]


def _curvature_schur(g: Graph, x: int) -> float:
    s1, s2 = _ball_partition(g, x)
    ds, ms = len(s1), len(s2)
    basis = [x] + s1 + s2
    idx = np.array(basis)
    b = _gamma2_matrix_at(g, x)[np.ix_(idx, idx)]
    # fix f(x) = 0: both forms are invariant under adding constants
    b = b[1:, 1:]
    b11 = b[:ds, :ds]
    b12 = b[:ds, ds:]
    b22 = b[ds:, ds:]
    if ms > 0:
        evals, evecs = np.linalg.eigh(b22)
        if evals.min() < -1e-8:
            raise AssertionError("Gamma2 block over the 2-sphere is not PSD")
        inv = np.where(evals > 1e-11, 1.0 / np.maximum(evals, 1e-300), 0.0)
        pinv = (evecs * inv) @ evecs.T
        residual = b22 @ pinv @ b12.T - b12.T
        if np.abs(residual).max() > 1e-7:
            raise AssertionError("Gamma2 cross block escapes the range of its kernel block")
        q = b11 - b12 @ pinv @ b12.T
    else:
        q = b11
    lam_min = float(np.linalg.eigvalsh(0.5 * (q + q.T)).min())
    return 2.0 * g.degree(x) * lam_min


def _curvature_bisect(g: Graph, x: int, lo: float, hi: float, iters: int = 60) -> float:
    """Largest K with Gamma2 - K Gamma PSD at x, by bisection."""
    s1, s2 = _ball_partition(g, x)
    ds = len(s1)
    basis = [x] + s1 + s2
    idx = np.array(basis)
    b = _gamma2_matrix_at(g, x)[np.ix_(idx, idx)][1:, 1:]
    a = np.zeros_like(b)
    a[:ds, :ds] = np.eye(ds) / (2.0 * g.degree(x))

    def psd(k: float) -> bool:
        return float(np.linalg.eigvalsh(b - k * a).min()) >= -PSD_TOL

    if not psd(lo):
        raise AssertionError("bisection lower bound is not PSD")
    while psd(hi):
        lo, hi = hi, hi + (hi - lo + 1.0)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if psd(mid):
            lo = mid
        else:
            hi = mid
    return lo


def be_curvature(
    g: Graph,
    x: int,
    d: DistanceOracle | None = None,
    verify: bool = False,
) -> BEReport:
    """Normalized Bakry-Emery infinity-curvature at x with sharpness data.

    ``verify=True`` re-derives the value by the PSD bisection and demands
    agreement within 1e-7.
    """
    if d is None:
        d = distances(g)
    if not d.is_connected:
        raise Disconnected("Bakry-Emery curvature needs a connected graph")
    k = _curvature_schur(g, x)
    if verify:
        k_bis = _curvature_bisect(g, x, lo=k - 1.0, hi=k + 1.0)
        if abs(k - k_bis) > SHARP_TOL:
            raise AssertionError(
                f"Schur value {k} and bisection value {k_bis} disagree at {x}"
            )
    deg = g.is_regular()
    upper: Optional[Fraction] = None
    sharp = False
    if deg is not None:
        upper = be_upper_bound(g, d, x)
        sharp = abs(k - float(upper)) < SHARP_TOL
    s1_reg, lam1, _passes = s1pp_sharpness_test(g, d, x)
    return BEReport(
        vertex=x,
        curvature=k,
        upper_bound=upper,
        is_sharp=sharp,
        s1_out_regular=s1_reg,
        s1pp_lambda1=lam1,
    )


def be_upper_bound(g: Graph, d: DistanceOracle, x: int) -> Fraction:
    """Exact upper bound 2/D + #triangles(x)/D^2 for a D-regular graph.

    Also evaluated as (3 + D - av_1^+(x)) / (2D); the two expressions must
    agree.
    """
    deg = g.is_regular()
    if deg is None:
        raise NotRegular("the curvature upper bound is stated for regular graphs")
    tri = triangle_count_vertex(g, x)
    via_triangles = Fraction(2, deg) + Fraction(tri, deg * deg)
    av_plus = sphere_averages(g, d, x, 1)[2]
    via_average = (3 + deg - av_plus) / (2 * deg)
    if via_triangles != via_average:
        raise AssertionError("upper bound expressions disagree")
    return via_triangles


def s1pp_sharpness_test(
    g: Graph, d: DistanceOracle, x: int
) -> tuple[bool, Optional[float], Optional[bool]]:
    """(applicable, lambda1, passes) for the weighted 1-sphere Laplacian test.

    Applicable only at S1-out regular vertices.  The weighted graph S1''(x)
    carries the induced 1-sphere edges plus weights
    w'(y, y') = sum_z w(y, z) w(z, y') / d_x^-(z) over z in the 2-sphere;
    the vertex is infinity-curvature sharp iff the smallest nonzero
    eigenvalue of its Laplacian is at least D/2.
    """
    s1, s2 = _ball_partition(g, x)
    out_degrees = set()
    dist_x = d.dist[x]
    for y in s1:
        out_degrees.add(sum(1 for z in g.adjacency[y] if dist_x[z] == 2))
    if len(out_degrees) != 1:
        return False, None, None
    k = len(s1)
    pos = {y: i for i, y in enumerate(s1)}
    w = np.zeros((k, k), dtype=np.float64)
    for y in s1:
        for z in g.adjacency[y]:
            if z in pos and pos[z] > pos[y]:
                w[pos[y], pos[z]] += 1.0
                w[pos[z], pos[y]] += 1.0
    for z in s2:
        back = [y for y in g.adjacency[z] if y in pos]
        share = 1.0 / len(back)
        for i, y in enumerate(back):
            for yy in back[i + 1 :]:
                w[pos[y], pos[yy]] += share
                w[pos[yy], pos[y]] += share
    lap = np.diag(w.sum(axis=1)) - w
    eigs = np.sort(np.linalg.eigvalsh(lap))
    nonzero = eigs[eigs > 1e-9]
    if nonzero.size == 0:
        return True, None, False
    lam1 = float(nonzero[0])
    deg = g.degree(x)
    return True, lam1, lam1 >= deg / 2.0 - SHARP_TOL


@dataclass(frozen=True)
class ConjectureReport:
    """Instance evidence for the diameter upper bound on the curvature infimum."""

    inf_curvature: float
    argmin_vertex: int
    bound: Fraction
    margin: float
    holds: bool
    weak_bound: Fraction
    weak_holds: bool


def conjecture_scan(g: Graph, d: DistanceOracle | None = None) -> ConjectureReport:
    """Compare inf_x K(x) against 1/D + 1/L and the weaker certified bound
    1/D + 1/L + max_x #triangles(x)/(2 D^2)."""
    deg = g.is_regular()
    if deg is None:
        raise NotRegular("the conjecture scanner needs a regular graph")
    if d is None:
        d = distances(g)
    if not d.is_connected:
        raise Disconnected("the conjecture scanner needs a connected graph")
    values = [(_curvature_schur(g, x), x) for x in range(g.n)]
    inf_val, argmin = min(values)
    bound = Fraction(1, deg) + Fraction(1, d.diameter)
    max_tri = max(triangle_count_vertex(g, x) for x in range(g.n))
    weak = bound + Fraction(max_tri, 2 * deg * deg)
    margin = float(bound) - inf_val
    return ConjectureReport(
        inf_curvature=inf_val,
        argmin_vertex=argmin,
        bound=bound,
        margin=margin,
        holds=margin >= -SHARP_TOL,
        weak_bound=weak,
        weak_holds=(float(weak) - inf_val) >= -SHARP_TOL,
    )
