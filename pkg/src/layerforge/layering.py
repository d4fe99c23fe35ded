"""Layering semantics: feasibility/validity checks, the combined objective,
reversed-edge deduction, and layout metrics estimated from a layering.

A layering is a plain ``dict[node id -> layer index]``.  Internally layers are
arbitrary signed integers; :func:`canonicalize` shifts and compresses them to
the contiguous 1-based form used at module boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .graph import Edge, Graph, normalize

Layering = dict[int, int]


class InfeasibleLayeringError(ValueError):
    """Some edge has both endpoints on the same layer."""


@dataclass(frozen=True)
class GlpWeights:
    """Objective weights: cost per unit of edge length, cost per reversed
    edge (None means reversals are infinitely expensive), and an optional
    cap on the number of layers."""
    w_len: int = 1
    w_rev: int | None = 5
    max_layers: int | None = None

    def __post_init__(self) -> None:
        if self.w_len < 1:
            raise ValueError("w_len must be >= 1")
        if self.w_rev is not None and self.w_rev < 1:
            raise ValueError("w_rev must be >= 1 or None (infinite)")
        if self.max_layers is not None and self.max_layers < 1:
            raise ValueError("max_layers must be positive")

    @property
    def infinite_rev(self) -> bool:
        return self.w_rev is None

    def rev_surrogate(self, g: Graph) -> int:
        """Finite stand-in for an infinite reversal weight: strictly larger
        than any possible total length term, so one reversal always costs
        more than any length saving."""
        return 1 + self.w_len * g.n * sum(g.weights)

    def effective_rev(self, g: Graph) -> int:
        return self.rev_surrogate(g) if self.w_rev is None else self.w_rev


@dataclass(frozen=True, eq=True)
class GlpSolution:
    layering: Layering
    reversed_edges: frozenset[Edge]
    objective: int


@dataclass(frozen=True)
class MetricsReport:
    reversed_count: int
    edge_length_sum: int
    dummy_count: int
    layer_count: int
    max_layer_width: int
    est_area: int
    est_aspect_ratio: Fraction


def _check_cover(g: Graph, layers: Mapping[int, int]) -> None:
    for v in range(g.n):
        if v not in layers:
            raise ValueError(f"layering is missing node {v}")


def is_feasible(g: Graph, layers: Mapping[int, int]) -> bool:
    """True iff every edge's endpoints sit on different layers."""
    _check_cover(g, layers)
    return all(layers[u] != layers[v] for u, v in g.edges)


def is_valid(g: Graph, layers: Mapping[int, int]) -> bool:
    """True iff every edge strictly increases the layer index."""
    _check_cover(g, layers)
    return all(layers[v] - layers[u] >= 1 for u, v in g.edges)


def canonicalize(layers: Mapping[int, int]) -> Layering:
    """Compress the used layer indices to 1..k, keeping their order."""
    if not layers:
        return {}
    remap = {old: new for new, old in enumerate(sorted(set(layers.values())), start=1)}
    return {v: remap[layers[v]] for v in sorted(layers)}


def reversed_set(g: Graph, layers: Mapping[int, int]) -> frozenset[Edge]:
    return frozenset((u, v) for u, v in g.edges if layers[u] > layers[v])


def objective(g: Graph, layers: Mapping[int, int], w: GlpWeights) -> GlpSolution:
    """Score a feasible layering: weighted total edge length plus weighted
    reversed-edge count (per-edge weights multiply both terms).

    An infinite reversal weight is scored through its finite surrogate, which
    keeps the objective an integer while preserving the lexicographic
    "fewer reversals always wins" order.
    """
    _check_cover(g, layers)
    w_rev = w.effective_rev(g)
    total = 0
    rev: list[Edge] = []
    for i, (u, v) in enumerate(g.edges):
        d = layers[v] - layers[u]
        if d == 0:
            raise InfeasibleLayeringError(f"edge ({u}, {v}) is flat")
        total += w.w_len * g.weights[i] * abs(d)
        if d < 0:
            rev.append((u, v))
            total += w_rev * g.weights[i]
    return GlpSolution(layering=dict(layers), reversed_edges=frozenset(rev), objective=total)


def deduce_acyclic(g: Graph, layers: Mapping[int, int]) -> tuple[Graph, frozenset[Edge]]:
    """Flip every edge that points against the layering.

    Returns the flipped graph (normalized, so a flip that duplicates an
    existing edge merges into it with summed weight) together with the set of
    original edges that were flipped.  The result is acyclic because every
    remaining edge strictly increases the layer index.
    """
    _check_cover(g, layers)
    flipped: list[Edge] = []
    new_edges: list[Edge] = []
    for u, v in g.edges:
        d = layers[v] - layers[u]
        if d == 0:
            raise InfeasibleLayeringError(f"edge ({u}, {v}) is flat")
        if d < 0:
            flipped.append((u, v))
            new_edges.append((v, u))
        else:
            new_edges.append((u, v))
    raw = Graph(n=g.n, edges=tuple(new_edges), weights=g.weights, labels=g.labels)
    out, _ = normalize(raw)
    return out, frozenset(flipped)


def metrics(g: Graph, layers: Mapping[int, int]) -> MetricsReport:
    """Layout metrics available before any coordinates exist.

    Lengths and dummy counts are unweighted: a dummy node stands on every
    layer an edge crosses strictly between its endpoints, and the width of a
    layer counts its real nodes plus the dummies standing on it.
    """
    _check_cover(g, layers)
    lay = canonicalize(layers)
    if not lay:
        return MetricsReport(0, 0, 0, 0, 0, 0, Fraction(0))
    height = max(lay.values())
    width = [0] * (height + 1)
    for v in lay:
        width[lay[v]] += 1
    length_sum = 0
    rev = 0
    for u, v in g.edges:
        a, b = lay[u], lay[v]
        if a == b:
            raise InfeasibleLayeringError(f"edge ({u}, {v}) is flat")
        if a > b:
            rev += 1
            a, b = b, a
        length_sum += b - a
        for layer in range(a + 1, b):
            width[layer] += 1
    max_width = max(width[1:])
    return MetricsReport(
        reversed_count=rev,
        edge_length_sum=length_sum,
        dummy_count=length_sum - g.m,
        layer_count=height,
        max_layer_width=max_width,
        est_area=height * max_width,
        est_aspect_ratio=Fraction(max_width, height),
    )
