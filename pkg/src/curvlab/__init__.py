"""curvlab: exact Ollivier-Ricci and Bakry-Emery curvature on finite regular graphs."""

from .graphs import (
    DegreeTriple,
    DistanceOracle,
    Graph,
    SrgParams,
    build_graph,
    cartesian_product,
    degree_triple,
    distances,
    intersection_array,
    interval,
    is_cocktail_party,
    is_strongly_regular,
    mu_graph,
    poles_and_antipoles,
    sphere_averages,
    triangle_count_edge,
    triangle_count_vertex,
)
from .transport import (
    CurvatureValue,
    Measure,
    TransportGeodesic,
    TransportMap,
    TransportPlan,
    certify_duality,
    curvature_via_matching,
    idle_measure,
    interval_antipole,
    kappa,
    kappa_lly,
    kappa_p,
    switching_map,
    tpm_transport_map,
    transport_geodesic,
    wasserstein,
)
from .families import FamilySpec, from_spec

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "DistanceOracle",
    "DegreeTriple",
    "SrgParams",
    "build_graph",
    "distances",
    "interval",
    "degree_triple",
    "sphere_averages",
    "triangle_count_edge",
    "triangle_count_vertex",
    "mu_graph",
    "is_cocktail_party",
    "is_strongly_regular",
    "intersection_array",
    "cartesian_product",
    "poles_and_antipoles",
    "Measure",
    "TransportPlan",
    "TransportMap",
    "TransportGeodesic",
    "CurvatureValue",
    "idle_measure",
    "wasserstein",
    "kappa",
    "kappa_p",
    "kappa_lly",
    "curvature_via_matching",
    "certify_duality",
    "tpm_transport_map",
    "transport_geodesic",
    "interval_antipole",
    "switching_map",
    "FamilySpec",
    "from_spec",
]
