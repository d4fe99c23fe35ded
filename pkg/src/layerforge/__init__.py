"""Layer assignment for directed graphs where the set of reversed edges is
chosen together with the layers, trading reversals against edge length.

Solvers: :func:`solve_exact` (branch and bound, desk scale),
:func:`solve_glp_heuristic` (construction + improvement pipeline), and
:func:`eaga_layering` (greedy cycle removal followed by network-simplex
layering, the classical two-phase baseline).
"""

from .corpus import GeneratorConfig, ParseError, filter_tall, generate, read_graph, write_graph
from .cycle_removal import backward_edges, eaga_layering, greedy_fas_order
from .exact import (ExactResult, IpModel, brute_force_min_length, brute_force_oracle,
                    build_model, export_lp, parse_lp, solve_exact)
from .graph import (CyclicGraphError, Graph, NormalizeReport, PeelEntry, PeelRecord,
                    normalize, peel_leaves, reattach_leaves)
from .heuristic import (PhaseTimings, compute_move, compute_profit, construct_layering,
                        improve_layering, solve_glp_heuristic, solve_glp_heuristic_timed)
from .layering import (GlpSolution, GlpWeights, InfeasibleLayeringError, MetricsReport,
                       canonicalize, deduce_acyclic, is_feasible, is_valid, metrics,
                       objective, reversed_set)
from .simplex import active_backend, longest_path_init, min_length_layering
from .svg import render_svg

__version__ = "0.1.0"

__all__ = [
    "CyclicGraphError", "ExactResult", "GeneratorConfig", "GlpSolution", "GlpWeights",
    "Graph", "InfeasibleLayeringError", "IpModel", "MetricsReport", "NormalizeReport",
    "ParseError", "PeelEntry", "PeelRecord", "PhaseTimings", "active_backend",
    "backward_edges", "brute_force_min_length", "brute_force_oracle", "build_model",
    "canonicalize", "compute_move", "compute_profit", "construct_layering",
    "deduce_acyclic", "eaga_layering", "export_lp", "filter_tall", "generate",
    "greedy_fas_order", "improve_layering", "is_feasible", "is_valid",
    "longest_path_init", "metrics", "min_length_layering", "normalize", "objective",
    "parse_lp", "peel_leaves", "read_graph", "reattach_leaves", "render_svg",
    "reversed_set", "solve_exact", "solve_glp_heuristic", "solve_glp_heuristic_timed",
    "write_graph",
]
