"""Test-data supply: random graph generation, graph file IO, and corpus
filtering.

The generator draws a node count, hands out that many times 1.5 outgoing
edge slots by repeated uniform node choice, fills each slot with a uniform
target (resampling duplicates a bounded number of times), and drops isolated
nodes.  Readers cover a DOT subset and a whitespace edge list; writers emit
a canonical form that reads back identically.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass

from .graph import Graph, NormalizeReport, normalize


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class GeneratorConfig:
    min_nodes: int = 17
    max_nodes: int = 60
    edge_factor: float = 1.5
    count: int = 160
    seed: int = 0

    def __post_init__(self) -> None:
        if self.min_nodes < 1 or self.max_nodes < self.min_nodes:
            raise ValueError("node range must satisfy 1 <= min <= max")
        if self.edge_factor <= 0:
            raise ValueError("edge_factor must be positive")
        if self.count < 0:
            raise ValueError("count must be non-negative")


def generate(config: GeneratorConfig) -> list[Graph]:
    """Deterministic random corpus: graph ``i`` depends only on
    ``(config.seed, i)`` and the size/edge parameters."""
    return [_generate_one(config, i) for i in range(config.count)]


def _generate_one(config: GeneratorConfig, index: int) -> Graph:
    rng = random.Random(config.seed * 1_000_003 + index)
    n = rng.randint(config.min_nodes, config.max_nodes)
    total_out = round(config.edge_factor * n)
    out_degree = [0] * n
    for _ in range(total_out):
        out_degree[rng.randrange(n)] += 1
    edges: set[tuple[int, int]] = set()
    edge_list: list[tuple[int, int]] = []
    for u in range(n):
        for _ in range(out_degree[u]):
            for _attempt in range(n):
                t = rng.randrange(n - 1) if n > 1 else u
                if n > 1 and t >= u:
                    t += 1
                if n > 1 and (u, t) not in edges:
                    edges.add((u, t))
                    edge_list.append((u, t))
                    break
    touched = sorted({v for e in edge_list for v in e})
    remap = {orig: new for new, orig in enumerate(touched)}
    g = Graph.build(len(touched), [(remap[u], remap[v]) for u, v in edge_list])
    g, _ = normalize(g)
    return g


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>//[^\n]*|\#[^\n]*|/\*.*?\*/)
      | (?P<arrow>->|--)
      | (?P<quoted>"(?:[^"\\]|\\.)*")
      | (?P<id>[A-Za-z0-9_.]+)
      | (?P<sym>[{};=\[\],:])
    """,
    re.VERBOSE | re.DOTALL,
)


def _tokenize_dot(text: str) -> list[tuple[str, str, int, int]]:
    tokens = []
    pos = 0
    line = 1
    col = 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            tokens.append((kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    return tokens


def _parse_dot(text: str) -> tuple[list[str], list[tuple[str, str]]]:
    toks = _tokenize_dot(text)
    i = 0

    def peek() -> tuple[str, str, int, int] | None:
        return toks[i] if i < len(toks) else None

    def take() -> tuple[str, str, int, int]:
        nonlocal i
        if i >= len(toks):
            last = toks[-1] if toks else ("", "", 1, 1)
            raise ParseError("unexpected end of input", last[2], last[3])
        tok = toks[i]
        i += 1
        return tok

    def unquote(value: str) -> str:
        if value.startswith('"'):
            return value[1:-1].replace('\\"', '"').replace("\\\\", "\\")
        return value

    kind, value, ln, cl = take()
    if value.lower() == "strict":
        kind, value, ln, cl = take()
    if value.lower() not in ("digraph", "graph"):
        raise ParseError("expected 'digraph' or 'graph'", ln, cl)
    tok = take()
    if tok[0] in ("id", "quoted"):
        tok = take()
    if tok[1] != "{":
        raise ParseError("expected '{'", tok[2], tok[3])

    nodes: list[str] = []
    seen: set[str] = set()
    edges: list[tuple[str, str]] = []

    def declare(name: str) -> None:
        if name not in seen:
            seen.add(name)
            nodes.append(name)

    def skip_attrs() -> None:
        nxt = peek()
        while nxt and nxt[1] == "[":
            take()
            depth = 1
            while depth:
                t = take()
                if t[1] == "[":
                    depth += 1
                elif t[1] == "]":
                    depth -= 1
            nxt = peek()

    while True:
        tok = peek()
        if tok is None:
            raise ParseError("missing closing '}'", 1, 1)
        if tok[1] == "}":
            take()
            break
        if tok[1] == ";":
            take()
            continue
        tok = take()
        if tok[0] not in ("id", "quoted"):
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2], tok[3])
        if tok[0] == "id" and tok[1].lower() in ("graph", "node", "edge"):
            skip_attrs()
            continue
        nxt = peek()
        if nxt and nxt[1] == "=":  # top-level attribute assignment
            take()
            take()
            continue
        chain = [unquote(tok[1])]
        while (nxt := peek()) and nxt[0] == "arrow":
            take()
            target = take()
            if target[0] not in ("id", "quoted"):
                raise ParseError("expected a node id after edge operator",
                                 target[2], target[3])
            chain.append(unquote(target[1]))
        skip_attrs()
        for name in chain:
            declare(name)
        for a, b in zip(chain, chain[1:]):
            edges.append((a, b))
    return nodes, edges


def _parse_edgelist(text: str) -> tuple[list[str], list[tuple[str, str]]]:
    nodes: list[str] = []
    seen: set[str] = set()
    edges: list[tuple[str, str]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) == 1:
            if parts[0] not in seen:
                seen.add(parts[0])
                nodes.append(parts[0])
        elif len(parts) == 2:
            for name in parts:
                if name not in seen:
                    seen.add(name)
                    nodes.append(name)
            edges.append((parts[0], parts[1]))
        else:
            raise ParseError("expected 'node' or 'source target'",
                             ln, len(line.split()[0]) + 1)
    return nodes, edges


def read_graph(text: str, format: str = "dot") -> tuple[Graph, NormalizeReport]:
    """Parse a DOT subset (``digraph { a -> b; }``; attributes ignored,
    ``--`` edges oriented source to target) or a whitespace edge list (one
    ``u v`` pair per line, bare ids declare isolated nodes, ``#`` comments).

    Returns the normalized graph plus the report of what normalization
    changed (dropped self-loops, merged duplicates).
    """
    if format == "dot":
        names, label_edges = _parse_dot(text)
    elif format == "edgelist":
        names, label_edges = _parse_edgelist(text)
    else:
        raise ValueError(f"unknown format {format!r}")
    ids = {name: i for i, name in enumerate(names)}
    g = Graph.build(names, [(ids[a], ids[b]) for a, b in label_edges])
    return normalize(g)


def write_graph(g: Graph, format: str = "edgelist") -> str:
    """Canonical text form: every node declared in id order, then edges
    sorted by (source, target) id.  read_graph(write_graph(g)) == g for
    normalized graphs."""
    order = sorted(range(g.m), key=lambda k: g.edges[k])
    if format == "edgelist":
        for lbl in g.labels:
            if re.search(r"\s", lbl) or lbl.startswith("#"):
                raise ValueError(f"label {lbl!r} cannot be written as edgelist")
        lines = list(g.labels)
        lines += [f"{g.labels[g.edges[k][0]]} {g.labels[g.edges[k][1]]}" for k in order]
        return "\n".join(lines) + "\n"
    if format == "dot":
        def q(lbl: str) -> str:
            return '"' + lbl.replace("\\", "\\\\").replace('"', '\\"') + '"'
        lines = ["digraph g {"]
        lines += [f"  {q(lbl)};" for lbl in g.labels]
        lines += [f"  {q(g.labels[g.edges[k][0]])} -> {q(g.labels[g.edges[k][1]])};"
                  for k in order]
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {format!r}")


def _is_undirected_tree(g: Graph) -> bool:
    if g.m != g.n - 1:
        return False
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False  # undirected cycle
        parent[ru] = rv
    return True


def filter_tall(graphs: list[Graph], min_nodes: int = 20) -> list[Graph]:
    """Keep graphs with at least ``min_nodes`` nodes that are not paths or
    trees (treated as undirected: a tree's edges all fit at length 1, so the
    combined solvers cannot improve it).

    The companion aspect-ratio filter needs a finished drawing and is out of
    scope here, so it is intentionally not applied.
    """
    return [g for g in graphs
            if g.n >= min_nodes and not _is_undirected_tree(g)]
