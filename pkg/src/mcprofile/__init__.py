"""Color profiles of perfect matchings in randomly colored random bipartite graphs."""

from .audit import LemmaParams, audit_random, evaluate_condition, paper_constants
from .errors import GraphFormatError, MatchingError, ModelDomainError, SizeCapError
from .expansion import expansion_trace
from .graph import (
    ColoredBipartiteGraph,
    ColorLaw,
    RandomModelParams,
    color_subgraph,
    count_color_edges,
    deserialize,
    edge_probability,
    generate,
    generate_with_p,
    neighbors_colored,
    serialize,
)
from .matching import Matching, is_perfect, maximum_matching, profile, validate_matching
from .oracle import contains_profile, mcp_bruteforce, mcp_subset_dp
from .recolor import AlternatingCycle, apply_cycle, find_swap_cycle, recolor_to_target

__version__ = "0.1.0"

__all__ = [
    "AlternatingCycle",
    "ColorLaw",
    "ColoredBipartiteGraph",
    "GraphFormatError",
    "LemmaParams",
    "Matching",
    "MatchingError",
    "ModelDomainError",
    "RandomModelParams",
    "SizeCapError",
    "apply_cycle",
    "audit_random",
    "color_subgraph",
    "contains_profile",
    "count_color_edges",
    "deserialize",
    "edge_probability",
    "evaluate_condition",
    "expansion_trace",
    "find_swap_cycle",
    "generate",
    "generate_with_p",
    "is_perfect",
    "maximum_matching",
    "mcp_bruteforce",
    "mcp_subset_dp",
    "neighbors_colored",
    "paper_constants",
    "profile",
    "recolor_to_target",
    "serialize",
    "validate_matching",
]
