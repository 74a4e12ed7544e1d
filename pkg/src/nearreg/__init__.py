"""Toolkit for extracting large nearly regular subgraphs from arbitrary
graphs: degree peeling, density boosting, matching cascades, exact
small-instance oracles, Monte Carlo estimators, and instance generators."""

from .edge_regular import (
    Bipartition,
    CascadeState,
    bipartite_half,
    extract_perfect_matching,
    matching_cascade,
    matching_lower_bound,
    min_tight_set,
    theorem41,
)
from .errors import (
    BoundViolationError,
    CapExceededError,
    EdgeListError,
    HallViolationError,
    NearRegError,
    PreconditionError,
    SizeCapError,
)
from .graph import (
    BoundCheck,
    DegreeStats,
    ExtractionResult,
    Graph,
    degree_stats,
    induced,
    nearly_regular_check,
    parse_edge_list,
    serialize_edge_list,
)
from .instances import (
    ModelParams,
    blocks,
    blocks_padded,
    complete_bipartite,
    expected_gnp_bar_edges,
    sample_gnp_bar,
    sample_gnp_uniform,
    star,
)
from .oracle import (
    CalibrationConstants,
    OracleResult,
    estimate_point_prob,
    estimate_regular_prob,
    exact_edge_regular,
    exact_f,
    exact_f_n,
    point_prob_distribution,
)
from .peeling import (
    PeelStep,
    PeelTrace,
    peel_below,
    prop21_refine,
    prop22_reduce,
    proposition11_pipeline,
)
from .regularize import (
    BoostOutcome,
    BoostParams,
    check_edge_boundary,
    density_boost,
    find_dense_subset,
    lemma25_extract,
    theorem12_pipeline,
    theorem13_pipeline,
    turan_independent_set,
)

__version__ = "0.1.0"

__all__ = [
    "Bipartition",
    "BoostOutcome",
    "BoostParams",
    "BoundCheck",
    "BoundViolationError",
    "CalibrationConstants",
    "CapExceededError",
    "CascadeState",
    "DegreeStats",
    "EdgeListError",
    "ExtractionResult",
    "Graph",
    "HallViolationError",
    "ModelParams",
    "NearRegError",
    "OracleResult",
    "PeelStep",
    "PeelTrace",
    "PreconditionError",
    "SizeCapError",
    "bipartite_half",
    "blocks",
    "blocks_padded",
    "check_edge_boundary",
    "complete_bipartite",
    "degree_stats",
    "density_boost",
    "estimate_point_prob",
    "estimate_regular_prob",
    "exact_edge_regular",
    "exact_f",
    "exact_f_n",
    "expected_gnp_bar_edges",
    "extract_perfect_matching",
    "find_dense_subset",
    "induced",
    "lemma25_extract",
    "matching_cascade",
    "matching_lower_bound",
    "min_tight_set",
    "nearly_regular_check",
    "parse_edge_list",
    "peel_below",
    "point_prob_distribution",
    "prop21_refine",
    "prop22_reduce",
    "proposition11_pipeline",
    "sample_gnp_bar",
    "sample_gnp_uniform",
    "serialize_edge_list",
    "star",
    "theorem12_pipeline",
    "theorem13_pipeline",
    "theorem41",
    "turan_independent_set",
]
