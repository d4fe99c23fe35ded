"""Greedy feedback-arc-set vertex ordering and the two-phase baseline.

The classic pipeline breaks cycles first (greedy sink/source peeling with a
max out-minus-in fallback), then layers the resulting DAG with the network
simplex.  The combined solvers in :mod:`layerforge.heuristic` and
:mod:`layerforge.exact` are measured against this baseline.
"""

from __future__ import annotations

from .graph import Edge, Graph, normalize
from .layering import Layering
from .simplex import min_length_layering

VertexOrder = tuple[int, ...]


def greedy_fas_order(g: Graph, seed: int = 0) -> VertexOrder:
    """Vertex order whose backward edges form a small feedback arc set.

    Repeatedly emits sinks to the right end and sources to the left end;
    when neither exists, the node maximizing outdegree - indegree goes left.
    Ties always break toward the lowest node id, so the order is
    deterministic (``seed`` is reserved for a future randomized mode).
    """
    del seed
    n = g.n
    alive = [True] * n
    outd = [len(g.successors(v)) for v in range(n)]
    ind = [len(g.predecessors(v)) for v in range(n)]
    left: list[int] = []
    right: list[int] = []
    remaining = n

    def remove(v: int) -> None:
        nonlocal remaining
        alive[v] = False
        remaining -= 1
        for w in g.successors(v):
            if alive[w]:
                ind[w] -= 1
        for w in g.predecessors(v):
            if alive[w]:
                outd[w] -= 1

    while remaining:
        sink = next((v for v in range(n) if alive[v] and outd[v] == 0), None)
        if sink is not None:
            right.append(sink)
            remove(sink)
            continue
        source = next((v for v in range(n) if alive[v] and ind[v] == 0), None)
        if source is not None:
            left.append(source)
            remove(source)
            continue
        best = -1
        best_delta = 0
        for v in range(n):
            if alive[v] and (best < 0 or outd[v] - ind[v] > best_delta):
                best = v
                best_delta = outd[v] - ind[v]
        left.append(best)
        remove(best)
    return tuple(left + right[::-1])


def backward_edges(g: Graph, order: VertexOrder) -> frozenset[Edge]:
    """Edges pointing right-to-left under the order; reversing exactly these
    makes the graph acyclic."""
    if sorted(order) != list(range(g.n)):
        raise ValueError("order must be a permutation of the graph's nodes")
    pos = {v: i for i, v in enumerate(order)}
    return frozenset((u, v) for u, v in g.edges if pos[u] > pos[v])


def eaga_layering(g: Graph, seed: int = 0) -> Layering:
    """Two-phase baseline: greedy cycle removal, then minimum-length
    layering of the graph with the backward edges reversed.

    The result is feasible for the input graph and valid for the reversed
    one; score it with :func:`layerforge.layering.objective`.
    """
    back = backward_edges(g, greedy_fas_order(g, seed))
    edges = tuple((v, u) if (u, v) in back else (u, v) for u, v in g.edges)
    flipped, _ = normalize(Graph(n=g.n, edges=edges, weights=g.weights, labels=g.labels))
    return min_length_layering(flipped)
