"""Zero-free regions and approximate counting for the anti-ferromagnetic Potts model."""

from .conditions import (
    ConditionParams,
    ConditionReport,
    basic_conditions,
    closed_interval_conditions,
    improved_conditions,
    max_eps,
    minimal_k,
    proposition_k_bound,
)
from .errors import (
    ContractError,
    DiskMapError,
    GraphParseError,
    PottsError,
    SearchFailure,
    SizeCapError,
)
from .exact import (
    CoeffVector,
    potts_exact,
    potts_poly_in_w,
    potts_restricted,
    random_cluster_exact,
    roots_in_w,
)
from .graph import Boundary, EdgeWeights, Graph, parse_graph, read_graph
from .interpolation import InterpolationPlan, RegionSpec, approx_Z, region_contains
from .kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = [
    "ConditionParams",
    "ConditionReport",
    "basic_conditions",
    "closed_interval_conditions",
    "improved_conditions",
    "max_eps",
    "minimal_k",
    "proposition_k_bound",
    "ContractError",
    "DiskMapError",
    "GraphParseError",
    "PottsError",
    "SearchFailure",
    "SizeCapError",
    "CoeffVector",
    "potts_exact",
    "potts_poly_in_w",
    "potts_restricted",
    "random_cluster_exact",
    "roots_in_w",
    "Boundary",
    "EdgeWeights",
    "Graph",
    "parse_graph",
    "read_graph",
    "InterpolationPlan",
    "RegionSpec",
    "approx_Z",
    "region_contains",
    "KERNEL_BACKEND",
]
