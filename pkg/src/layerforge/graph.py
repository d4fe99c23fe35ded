"""Directed graph container plus the normalization and leaf-peeling passes.

Node ids are dense integers ``0..n-1``; every node additionally carries a
string label used by file formats and the CLI.  Edges are an ordered tuple of
``(source, target)`` pairs with positive integer weights.  All containers are
immutable, so graphs can be shared freely between solver invocations.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property

Edge = tuple[int, int]


class CyclicGraphError(ValueError):
    """Raised when an operation that needs an acyclic graph receives a cycle."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[Edge, ...]
    weights: tuple[int, ...]
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("node count must be non-negative")
        if len(self.labels) != self.n:
            raise ValueError(f"expected {self.n} labels, got {len(self.labels)}")
        if len(self.weights) != len(self.edges):
            raise ValueError("weights must parallel edges")
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) leaves node range 0..{self.n - 1}")
        for w in self.weights:
            if w < 1:
                raise ValueError("edge weights must be positive integers")

    @staticmethod
    def build(nodes: int | list[str] | tuple[str, ...],
              edges: list[Edge] | tuple[Edge, ...],
              weights: list[int] | tuple[int, ...] | None = None) -> "Graph":
        """Construct a graph from a node count (labels default to decimal ids)
        or an explicit label sequence, plus an edge list."""
        if isinstance(nodes, int):
            labels = tuple(str(i) for i in range(nodes))
            n = nodes
        else:
            labels = tuple(nodes)
            n = len(labels)
            if len(set(labels)) != n:
                raise ValueError("node labels must be unique")
        edges = tuple((int(u), int(v)) for u, v in edges)
        if weights is None:
            weights = tuple(1 for _ in edges)
        else:
            weights = tuple(int(w) for w in weights)
        return Graph(n=n, edges=edges, weights=weights, labels=labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def out_adj(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
        return tuple(tuple(a) for a in adj)

    @cached_property
    def in_adj(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[v].append(u)
        return tuple(tuple(a) for a in adj)

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        # On a normalized graph every (u, v) pair is unique; on raw input the
        # first occurrence wins, which is only used for membership tests.
        idx: dict[Edge, int] = {}
        for i, e in enumerate(self.edges):
            idx.setdefault(e, i)
        return idx

    def successors(self, v: int) -> tuple[int, ...]:
        return self.out_adj[v]

    def predecessors(self, v: int) -> tuple[int, ...]:
        return self.in_adj[v]

    def degree(self, v: int) -> int:
        return len(self.out_adj[v]) + len(self.in_adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edge_index

    def weight_of(self, u: int, v: int) -> int:
        return self.weights[self.edge_index[(u, v)]]

    def components(self) -> list[tuple[int, ...]]:
        """Weakly connected components, each sorted by id, ordered by their
        smallest member."""
        seen = [False] * self.n
        comps: list[tuple[int, ...]] = []
        for start in range(self.n):
            if seen[start]:
                continue
            stack = [start]
            seen[start] = True
            comp = []
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self.out_adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
                for w in self.in_adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(tuple(sorted(comp)))
        return comps

    def subgraph(self, nodes: tuple[int, ...]) -> tuple["Graph", tuple[int, ...]]:
        """Induced subgraph with densely relabeled ids.

        Returns the subgraph and the tuple mapping new id -> original id.
        """
        order = tuple(sorted(nodes))
        remap = {orig: new for new, orig in enumerate(order)}
        edges = []
        weights = []
        for i, (u, v) in enumerate(self.edges):
            if u in remap and v in remap:
                edges.append((remap[u], remap[v]))
                weights.append(self.weights[i])
        labels = tuple(self.labels[orig] for orig in order)
        return Graph(n=len(order), edges=tuple(edges), weights=tuple(weights), labels=labels), order

    def topological_order(self) -> tuple[int, ...]:
        """Kahn topological order (ready nodes taken in id order).

        Raises CyclicGraphError if the graph has a directed cycle.
        """
        indeg = [0] * self.n
        for _, v in self.edges:
            indeg[v] += 1
        ready = [v for v in range(self.n) if indeg[v] == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            v = heapq.heappop(ready)
            order.append(v)
            for w in self.out_adj[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    heapq.heappush(ready, w)
        if len(order) != self.n:
            raise CyclicGraphError("graph contains a directed cycle")
        return tuple(order)

    def is_acyclic(self) -> bool:
        try:
            self.topological_order()
        except CyclicGraphError:
            return False
        return True


@dataclass(frozen=True)
class NormalizeReport:
    """What normalize() changed: dropped self-loops and merged parallel edges
    (edge plus the number of copies folded into it)."""
    dropped_self_loops: tuple[Edge, ...] = ()
    merged_edges: tuple[tuple[Edge, int], ...] = ()

    @property
    def changed(self) -> bool:
        return bool(self.dropped_self_loops or self.merged_edges)


def normalize(g: Graph) -> tuple[Graph, NormalizeReport]:
    """Canonical form: no self-loops, parallel edges merged with summed
    weights, edges sorted by (source, target).

    Self-loops cannot appear in any layering where adjacent nodes occupy
    different layers, so they are dropped (and reported).  Idempotent.
    """
    dropped: list[Edge] = []
    weight_sum: dict[Edge, int] = {}
    copies: dict[Edge, int] = {}
    for i, (u, v) in enumerate(g.edges):
        if u == v:
            dropped.append((u, v))
            continue
        weight_sum[(u, v)] = weight_sum.get((u, v), 0) + g.weights[i]
        copies[(u, v)] = copies.get((u, v), 0) + 1
    edges = tuple(sorted(weight_sum))
    weights = tuple(weight_sum[e] for e in edges)
    merged = tuple((e, copies[e]) for e in edges if copies[e] > 1)
    out = Graph(n=g.n, edges=edges, weights=weights, labels=g.labels)
    return out, NormalizeReport(dropped_self_loops=tuple(dropped), merged_edges=merged)


@dataclass(frozen=True)
class PeelEntry:
    """One removed leaf: the node, its single neighbor at removal time (None
    for isolated nodes), and whether the connecting edge pointed toward the
    leaf (neighbor -> leaf)."""
    node: int
    neighbor: int | None
    toward_leaf: bool = False


@dataclass(frozen=True)
class PeelRecord:
    """Removal log from peel_leaves, in removal order, plus the surviving
    core nodes (original ids, sorted) for translating core layerings back."""
    entries: tuple[PeelEntry, ...]
    core_nodes: tuple[int, ...]
    n_original: int


def peel_leaves(g: Graph) -> tuple[Graph, PeelRecord]:
    """Iteratively strip nodes of total degree <= 1 (lowest id first).

    The returned core has no node of degree <= 1; the record replays the
    removals so reattach_leaves can rebuild a full layering.  Expects a
    normalized graph.
    """
    alive = [True] * g.n
    deg = [g.degree(v) for v in range(g.n)]
    # remaining incident edges per node, pruned lazily as neighbors vanish
    incident: list[list[tuple[int, bool]]] = [[] for _ in range(g.n)]
    for u, v in g.edges:
        incident[u].append((v, False))   # edge points away from u toward v
        incident[v].append((u, True))    # edge points toward v
    heap = [v for v in range(g.n) if deg[v] <= 1]
    heapq.heapify(heap)
    entries: list[PeelEntry] = []
    while heap:
        v = heapq.heappop(heap)
        if not alive[v] or deg[v] > 1:
            continue
        alive[v] = False
        neighbor: int | None = None
        toward = False
        for u, toward_v in incident[v]:
            if alive[u]:
                neighbor, toward = u, toward_v
                break
        entries.append(PeelEntry(node=v, neighbor=neighbor, toward_leaf=toward))
        if neighbor is not None:
            deg[neighbor] -= 1
            if deg[neighbor] <= 1:
                heapq.heappush(heap, neighbor)
    survivors = tuple(v for v in range(g.n) if alive[v])
    core, _ = g.subgraph(survivors)
    record = PeelRecord(entries=tuple(entries), core_nodes=survivors, n_original=g.n)
    return core, record


def reattach_leaves(core_layering: dict[int, int], record: PeelRecord) -> dict[int, int]:
    """Replay a peel record in reverse over a core layering.

    ``core_layering`` is keyed by the dense core ids produced by peel_leaves;
    the result is keyed by original node ids and covers the whole graph.
    Every reattached edge gets length exactly 1 in its original direction.
    """
    k = len(record.core_nodes)
    if set(core_layering) != set(range(k)):
        raise ValueError("core layering does not match the peel record's core")
    layers: dict[int, int] = {record.core_nodes[i]: core_layering[i] for i in range(k)}
    for entry in reversed(record.entries):
        if entry.neighbor is None:
            layers[entry.node] = 0
        else:
            if entry.neighbor not in layers:
                raise ValueError(f"peel record references unplaced neighbor {entry.neighbor}")
            step = 1 if entry.toward_leaf else -1
            layers[entry.node] = layers[entry.neighbor] + step
    if len(layers) != record.n_original:
        raise ValueError("peel record does not cover the original graph")
    return {v: layers[v] for v in range(record.n_original)}
