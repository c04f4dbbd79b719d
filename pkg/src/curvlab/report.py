"""Per-graph analysis reports: one JSON-ready verdict bundle per graph.

Reports are deterministic: sorted keys, canonical fraction strings, floats
printed to 12 significant digits.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Optional

from .bakry_emery import be_curvature
from .errors import PreconditionUnmet
from .graphs import DistanceOracle, Graph, distances, poles_and_antipoles
from .sharpness import (
    bm_sharpness,
    classify,
    is_strongly_spherical,
    lambda_m_check,
    local_srg_check,
    mu_graphs_all_cp,
)
from .spectral import is_lichnerowicz_sharp, spectral_summary


def frac_str(value: Fraction | int) -> str:
    f = Fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def float_str(value: float) -> str:
    return format(float(value), ".12g")


def analyze(
    g: Graph,
    d: Optional[DistanceOracle] = None,
    name: str = "graph",
    skip_be: bool = False,
    skip_spherical: bool = False,
) -> dict[str, Any]:
    """Run the full predicate pipeline and return the report dict."""
    if d is None:
        d = distances(g)
    deg = g.is_regular()
    L = d.diameter
    report: dict[str, Any] = {
        "graph": name,
        "vertices": g.n,
        "edges": g.edge_count,
        "regular": deg is not None,
        "D": deg,
        "L": L,
        "connected": d.is_connected,
    }
    if not d.is_connected or deg is None:
        return report

    verdict = bm_sharpness(g, d)
    _, self_centered = poles_and_antipoles(g, d)
    report["inf_kappa"] = frac_str(verdict.inf_edge_kappa)
    report["witness_edge"] = list(verdict.witness_edge)
    report["bm_sharp"] = verdict.is_bm_sharp
    report["dl_constraints"] = {
        "L_le_D": verdict.l_le_d,
        "L_divides_2D": verdict.l_divides_2d,
    }
    report["self_centered"] = self_centered

    lich = is_lichnerowicz_sharp(g, d, inf_edge_kappa=verdict.inf_edge_kappa)
    report["lambda1"] = float_str(lich.lambda1)
    report["lichnerowicz_sharp"] = lich.is_sharp
    report["lichnerowicz_exact_certificate"] = lich.exact_certificate

    summ = spectral_summary(g, d)
    report["theta1"] = float_str(summ.theta1) if summ.theta1 is not None else None
    report["lambda1_multiplicity"] = summ.lambda1_multiplicity

    if L >= 1:
        m = Fraction(2 * deg, L) - 2
        if m.denominator == 1 and m >= 0:
            lam = lambda_m_check(g, d, int(m))
            report["lambda_m"] = {"m": int(m), "holds": lam.holds}
        else:
            report["lambda_m"] = {"m": None, "holds": False}

    mu_verdict = mu_graphs_all_cp(g, d)
    report["mu_graphs"] = {
        "all_cocktail_party": mu_verdict.holds,
        "m_values": [list(item) for item in mu_verdict.m_values],
    }

    try:
        srg = local_srg_check(g, d)
        report["local_srg"] = {
            "holds": srg.holds,
            "params": [frac_str(p) for p in srg.params],
            "theta": frac_str(srg.theta),
        }
    except PreconditionUnmet as exc:
        report["local_srg"] = {"holds": None, "reason": str(exc)}

    if not skip_spherical:
        sph = is_strongly_spherical(g, d)
        report["strongly_spherical"] = sph.holds

    if not skip_be:
        rows = []
        inf_curv = None
        for x in range(g.n):
            row = be_curvature(g, x, d)
            rows.append(
                {
                    "vertex": x,
                    "curvature": float_str(row.curvature),
                    "upper_bound": frac_str(row.upper_bound)
                    if row.upper_bound is not None
                    else None,
                    "sharp": row.is_sharp,
                    "s1_out_regular": row.s1_out_regular,
                    "s1pp_lambda1": float_str(row.s1pp_lambda1)
                    if row.s1pp_lambda1 is not None
                    else None,
                }
            )
            if inf_curv is None or row.curvature < inf_curv:
                inf_curv = row.curvature
        report["bakry_emery"] = {
            "inf_curvature": float_str(inf_curv),
            "rows": rows,
        }

    cls = classify(g, d)
    report["classification"] = {
        "matched": cls.matched.to_json() if cls.matched else None,
        "reason": cls.reason,
    }
    return report


def report_json(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=True)
