"""Exact and query-based Ollivier-Ricci curvature on unweighted graphs."""

from .bounds import CurvatureBounds, curvature_bounds, tvd_closed_form
from .emd import (
    EmdResult,
    MpmctInstance,
    brute_force_emd,
    curvature_avg,
    curvature_edge,
    curvature_edge_matching,
    curvature_node,
    edge_curvatures,
    emd_matching,
    emd_transport,
    min_weight_perfect_matching,
    reduced_instance,
)
from .errors import (
    DegreeMismatch,
    DomainError,
    MalformedInput,
    NotAnEdge,
    OracleTooLarge,
    PreconditionViolation,
    RicciError,
    UnsupportedRegime,
)
from .graph import Graph, LocalBipartite, from_edge_list, local_bipartite, parse_edge_list, read_edge_list
from .local import ApproxCurvature, approx_edge, approx_equal_a, approx_equal_b, approx_unequal, make_padded_session
from .matching import MatchingEstimate, estimate_matching
from .oracle import EXHAUSTED, BipartiteSession, GraphSession, QueryCounters
from .reduction import PaddedBipartite, pad_to_equal, padded_emd, realize_as_graph
from .sampling import EstimatorConfig, estimate_avg_curvature, estimate_node_curvature, sample_uniform_edge

__version__ = "0.1.0"
