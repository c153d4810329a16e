"""Exact solver and counter for shortest disjoint A,B-paths in planar graphs
of maximum degree 3, built on Pfaffian orientations and exact perfect-matching
counts, with witness extraction and uniform sampling."""

__version__ = "0.1.0"

from .errors import (
    AbpathsError,
    InfeasibleError,
    InstanceTooLargeError,
    InternalInconsistencyError,
    NonCubicError,
    NonIntegerCoefficientError,
    NonPlanarError,
    NotPerfectSquareError,
    ParseError,
    ValidationError,
    WitnessIndexError,
    WorkLimitExceededError,
)
from .gadget import GadgetGraph, build_gadget_graph, subgraph_HX
from .graphs import Edge, Graph, Instance, PlanarEmbedding, faces, planar_embed, validate
from .hardness import mis_via_solver, reduce_mis
from .normalize import ReductionTrace, normalize_to_cubic
from .pfaffian import (
    SkewMatrix,
    build_skew_matrix,
    count_pm,
    det_exact,
    isqrt_exact,
    kasteleyn_orient,
    verify_orientation,
)
from .solver import (
    SolutionSummary,
    evaluate_p,
    interpolate,
    iter_witnesses,
    prepare,
    sample,
    solve,
    solve_report,
    witness,
)

__all__ = [
    "__version__",
    "AbpathsError",
    "Edge",
    "GadgetGraph",
    "Graph",
    "InfeasibleError",
    "Instance",
    "InstanceTooLargeError",
    "InternalInconsistencyError",
    "NonCubicError",
    "NonIntegerCoefficientError",
    "NonPlanarError",
    "NotPerfectSquareError",
    "ParseError",
    "PlanarEmbedding",
    "ReductionTrace",
    "SkewMatrix",
    "SolutionSummary",
    "ValidationError",
    "WitnessIndexError",
    "WorkLimitExceededError",
    "build_gadget_graph",
    "build_skew_matrix",
    "count_pm",
    "det_exact",
    "evaluate_p",
    "faces",
    "interpolate",
    "isqrt_exact",
    "iter_witnesses",
    "kasteleyn_orient",
    "mis_via_solver",
    "normalize_to_cubic",
    "planar_embed",
    "prepare",
    "reduce_mis",
    "sample",
    "solve",
    "solve_report",
    "subgraph_HX",
    "validate",
    "verify_orientation",
    "witness",
]
