"""Minimum total edge length layering of acyclic graphs (network simplex).

This is the compaction step every pipeline here ends with: given a DAG it
returns a valid layering minimizing the weighted sum of edge lengths.
Disconnected graphs are solved per component, each starting at layer 1.
"""

from __future__ import annotations

import warnings

from . import _kernels
from .graph import CyclicGraphError, Graph
from .layering import Layering


def longest_path_init(g: Graph) -> Layering:
    """Valid layering with every node one past its furthest predecessor.

    Cheap and valid but usually longer than optimal; used as the simplex
    starting point and as the fallback when the pivot cap fires.
    """
    order = g.topological_order()  # raises CyclicGraphError on cycles
    layers = [1] * g.n
    for u in order:
        for v in g.successors(u):
            if layers[v] < layers[u] + 1:
                layers[v] = layers[u] + 1
    return {v: layers[v] for v in range(g.n)}


def min_length_layering(g: Graph, backend: str | None = None) -> Layering:
    """Valid layering of an acyclic graph minimizing total weighted edge
    length; deterministic (ties resolved by the fixed pivot rule).

    Raises CyclicGraphError on cyclic input.  If the pivot cap (|V|*|E|)
    fires, falls back to the longest-path layering and emits a warning.
    """
    if not g.is_acyclic():
        raise CyclicGraphError("min_length_layering requires an acyclic graph")
    kern = _kernels.get_backend(backend)
    layers: dict[int, int] = {}
    for comp in g.components():
        if len(comp) == 1:
            layers[comp[0]] = 1
            continue
        sub, orig = g.subgraph(comp)
        cap = sub.n * sub.m
        ranks, _pivots, capped = kern.simplex_component(
            sub.n, [e[0] for e in sub.edges], [e[1] for e in sub.edges],
            list(sub.weights), cap)
        if capped:
            warnings.warn(
                f"simplex pivot cap ({cap}) reached on a {sub.n}-node component; "
                "using the longest-path layering for it", RuntimeWarning)
            lp = longest_path_init(sub)
            ranks = [lp[v] - 1 for v in range(sub.n)]
        for local, r in enumerate(ranks):
            layers[orig[local]] = r + 1
    return {v: layers[v] for v in range(g.n)}


def active_backend() -> str:
    """Name of the kernel backend selected at import ('c' or 'python')."""
    return _kernels.ACTIVE_NAME
