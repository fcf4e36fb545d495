"""Resistance and Ollivier-Ricci curvature on weighted undirected graphs."""

from ._accel import backend
from .analysis import betweenness, girvan_newman, pattern_check, summarize_distribution
from .errors import CurvkitError, DisconnectedGraph
from .generators import GenSpec, generate
from .graph import Graph, laplacian, load_edge_list, load_tu_dataset, read_edge_list, write_edge_list
from .ollivier import or_curvature
from .propagation import GSpec, aggregation_operator, pool_reweight, propagate
from .resistance import effective_resistance, resistance_curvature

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "GenSpec",
    "GSpec",
    "CurvkitError",
    "DisconnectedGraph",
    "aggregation_operator",
    "backend",
    "betweenness",
    "effective_resistance",
    "generate",
    "girvan_newman",
    "laplacian",
    "load_edge_list",
    "load_tu_dataset",
    "or_curvature",
    "pattern_check",
    "pool_reweight",
    "propagate",
    "read_edge_list",
    "resistance_curvature",
    "summarize_distribution",
    "write_edge_list",
]
