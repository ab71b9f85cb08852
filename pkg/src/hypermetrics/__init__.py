"""Hyperbolic-type metrics on proper subdomains of R^n."""
from .geometry import (
    IDEAL,
    Domain,
    HypermetricsError,
    NumericUnderflow,
    PointOutsideDomain,
    contains,
    dist_to_boundary,
    sample_interior,
)
from .metrics import MetricKind, MetricValue, evaluate, evaluate_all, evaluate_many, gromov_product
from .suprema import BoundaryKernel, PairKernel, SupResult, boundary_pair_sup, boundary_sup
from .verify import (
    equality_case_check,
    four_point_beta,
    monotonicity_counterexample_search,
    run_inequality_suite,
    sharpness_limit,
)
from .balls import BallQuery, check_inclusion, intersection_property_check, render, trace_ball

__version__ = "0.1.0"
