"""Exact solving at desk scale plus a portable integer-program export.

``solve_exact`` is a two-pass branch and bound over layer assignments: a
value pass (nodes in decreasing-degree order, shift-normalized layers,
incumbent seeded by the heuristic) proves the optimum, then a reconstruction
pass finds the lexicographically smallest assignment achieving it.
``build_model``/``export_lp`` emit the equivalent integer program in LP file
format for external solvers, and ``brute_force_oracle`` is the enumeration
oracle the solver is validated against.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from time import monotonic

from . import _kernels
from .graph import Graph
from .heuristic import solve_glp_heuristic
from .layering import GlpSolution, GlpWeights, Layering, canonicalize, objective

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


# ---------------------------------------------------------------------------
# integer-program model and LP text export
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[tuple[int, str], ...]  # (coefficient, variable)
    rhs: int  # sense is always >=


@dataclass(frozen=True)
class IpModel:
    """Linear objective and >=-constraints over integer layer variables l_*,
    binary reversal variables r_*, and integer length variables d_*."""
    objective: tuple[tuple[int, str], ...]
    constraints: tuple[Constraint, ...]
    bounds: tuple[tuple[str, int], ...]  # (variable, lower bound)
    generals: tuple[str, ...]
    binaries: tuple[str, ...]


def _node_names(g: Graph) -> list[str]:
    names = [lbl for lbl in g.labels]
    ok = all(_NAME_RE.match(lbl) for lbl in names) and len(set(names)) == g.n
    if ok:
        # joined edge variable names must stay collision-free too
        joined = [f"{g.labels[u]}_{g.labels[v]}" for u, v in g.edges]
        ok = len(set(joined)) == len(joined)
    if not ok:
        names = [f"n{v}" for v in range(g.n)]
    return names


def build_model(g: Graph, w: GlpWeights) -> IpModel:
    """Integer program for the combined layering objective.

    Variables: one layer l per node (integer, 1..cap), one reversal flag r
    and one length d per edge.  Rows: l <= cap per node, the two
    linearizations d >= +-(l_u - l_v) per edge, and the reversal binding
    n*r + l_target >= l_source + 1; d >= 1 in the bounds section enforces
    that adjacent nodes occupy different layers.  Needs a finite reversal
    weight (map an infinite one through GlpWeights.rev_surrogate first).
    """
    if w.w_rev is None:
        raise ValueError("IP export needs a finite reversal weight; "
                         "use GlpWeights.rev_surrogate(g) as a stand-in")
    cap = min(w.max_layers, g.n) if w.max_layers is not None else g.n
    names = _node_names(g)
    l_var = [f"l_{names[v]}" for v in range(g.n)]
    edge_tag = [f"{names[u]}_{names[v]}" for u, v in g.edges]
    d_var = [f"d_{t}" for t in edge_tag]
    r_var = [f"r_{t}" for t in edge_tag]

    obj: list[tuple[int, str]] = []
    for k in range(g.m):
        obj.append((w.w_len * g.weights[k], d_var[k]))
    for k in range(g.m):
        obj.append((w.w_rev * g.weights[k], r_var[k]))

    rows: list[Constraint] = []
    for v in range(g.n):
        rows.append(Constraint(f"lay_{names[v]}", ((-1, l_var[v]),), -cap))
    for k, (u, v) in enumerate(g.edges):
        rows.append(Constraint(f"abs1_{k}",
                               ((1, d_var[k]), (-1, l_var[v]), (1, l_var[u])), 0))
        rows.append(Constraint(f"abs2_{k}",
                               ((1, d_var[k]), (-1, l_var[u]), (1, l_var[v])), 0))
        rows.append(Constraint(f"rev_{k}",
                               ((g.n, r_var[k]), (1, l_var[v]), (-1, l_var[u])), 1))

    bounds = tuple([(lv, 1) for lv in l_var] + [(dv, 1) for dv in d_var])
    return IpModel(
        objective=tuple(obj),
        constraints=tuple(rows),
        bounds=bounds,
        generals=tuple(l_var + d_var),
        binaries=tuple(r_var),
    )


def _format_terms(terms: tuple[tuple[int, str], ...]) -> str:
    parts: list[str] = []
    for coef, var in terms:
        if coef < 0:
            sign = "-" if not parts else "- "
        else:
            sign = "" if not parts else "+ "
        mag = abs(coef)
        body = var if mag == 1 else f"{mag} {var}"
        parts.append(f"{sign}{body}")
    return " ".join(parts) if parts else "0"


def export_lp(model: IpModel) -> str:
    """Byte-stable LP file text (Minimize / Subject To / Bounds / Generals /
    Binaries sections)."""
    lines = ["\\ layerforge model", "Minimize", f" obj: {_format_terms(model.objective)}",
             "Subject To"]
    for c in model.constraints:
        lines.append(f" {c.name}: {_format_terms(c.terms)} >= {c.rhs}")
    lines.append("Bounds")
    for var, lo in model.bounds:
        lines.append(f" {var} >= {lo}")
    for section, group in (("Generals", model.generals), ("Binaries", model.binaries)):
        lines.append(section)
        for i in range(0, len(group), 8):
            chunk = " ".join(group[i:i + 8])
            if chunk:
                lines.append(f" {chunk}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def parse_lp(text: str) -> IpModel:
    """Parse text produced by export_lp back into a structurally identical
    IpModel (round-trip check for the export path)."""
    section = None
    objective: tuple[tuple[int, str], ...] = ()
    constraints: list[Constraint] = []
    bounds: list[tuple[str, int]] = []
    generals: list[str] = []
    binaries: list[str] = []
    headers = {"minimize": "Minimize", "subject to": "Subject To", "bounds": "Bounds",
               "generals": "Generals", "binaries": "Binaries", "end": "End"}

    def parse_terms(src: str) -> tuple[tuple[int, str], ...]:
        toks = src.split()
        terms: list[tuple[int, str]] = []
        sign = 1
        mag: int | None = None
        for tok in toks:
            if tok == "+":
                sign = 1
            elif tok == "-":
                sign = -1
            elif re.fullmatch(r"\d+", tok):
                mag = int(tok)
            else:
                name = tok
                neg = name.startswith("-")
                if neg:
                    name = name[1:]
                coef = (mag if mag is not None else 1) * (-1 if neg else sign)
                if name == "0" and mag is None and not terms:
                    return ()
                terms.append((coef, name))
                sign = 1
                mag = None
        return tuple(terms)

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        key = headers.get(line.lower())
        if key:
            section = key
            continue
        if section == "Minimize":
            body = line.split(":", 1)[1]
            objective = parse_terms(body)
        elif section == "Subject To":
            name, rest = line.split(":", 1)
            lhs, rhs = rest.split(">=")
            constraints.append(Constraint(name.strip(), parse_terms(lhs), int(rhs)))
        elif section == "Bounds":
            var, lo = line.split(">=")
            bounds.append((var.strip(), int(lo)))
        elif section == "Generals":
            generals.extend(line.split())
        elif section == "Binaries":
            binaries.extend(line.split())
    return IpModel(objective=objective, constraints=tuple(constraints),
                   bounds=tuple(bounds), generals=tuple(generals),
                   binaries=tuple(binaries))


# ---------------------------------------------------------------------------
# exact branch-and-bound solver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExactResult:
    solution: GlpSolution
    status: str  # "optimal" or "timeout"

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _edge_disjoint_cycles(n: int, edges: set[tuple[int, int]]) -> list[list[tuple[int, int]]]:
    """Greedy packing of edge-disjoint directed cycles (deterministic:
    DFS from the lowest id, successors ascending)."""
    out: dict[int, list[int]] = {v: [] for v in range(n)}
    for u, v in sorted(edges):
        out[u].append(v)
    cycles: list[list[tuple[int, int]]] = []
    while True:
        color = [0] * n  # 0 unseen, 1 on path, 2 done
        path: list[int] = []
        cycle: list[tuple[int, int]] | None = None
        for start in range(n):
            if cycle:
                break
            if color[start]:
                continue
            stack = [(start, 0)]
            color[start] = 1
            path.append(start)
            while stack and cycle is None:
                v, ptr = stack[-1]
                if ptr < len(out[v]):
                    stack[-1] = (v, ptr + 1)
                    u = out[v][ptr]
                    if color[u] == 1:
                        at = path.index(u)
                        nodes = path[at:]
                        cycle = list(zip(nodes, nodes[1:] + [nodes[0]]))
                    elif color[u] == 0:
                        color[u] = 1
                        path.append(u)
                        stack.append((u, 0))
                else:
                    stack.pop()
                    color[v] = 2
                    path.pop()
            if cycle:
                break
        if not cycle:
            return cycles
        cycles.append(cycle)
        for e in cycle:
            out[e[0]].remove(e[1])


def _bb_arrays(g: Graph, w_len: int, w_rev: int) -> tuple:
    """Flattened pair adjacency plus the bound bookkeeping: per-pair base
    costs, the cycle packing (pair -> cycle id and on-cycle direction),
    per-cycle reserves, and the initial bound b0."""
    pairs: dict[tuple[int, int], list[int]] = {}
    for i, (u, v) in enumerate(g.edges):
        a, b = (u, v) if u < v else (v, u)
        slot = pairs.setdefault((a, b), [0, 0])
        slot[0 if u == a else 1] += g.weights[i]
    single_dir = {(a, b) if wab else (b, a)
                  for (a, b), (wab, wba) in pairs.items() if not (wab and wba)}
    cycles = _edge_disjoint_cycles(g.n, single_dir)
    reserves = [min(g.weight_of(u, v) for u, v in cyc) for cyc in cycles]
    cyc_of: dict[tuple[int, int], int] = {}
    for ci, cyc in enumerate(cycles):
        for e in cyc:
            cyc_of[e] = ci

    per_node: list[list[tuple[int, int, int]]] = [[] for _ in range(g.n)]
    for (a, b), (wab, wba) in sorted(pairs.items()):
        per_node[a].append((b, wab, wba))
        per_node[b].append((a, wba, wab))
    astart = [0]
    anbr: list[int] = []
    awf: list[int] = []
    awb: list[int] = []
    abase: list[int] = []
    acyc: list[int] = []
    adir: list[int] = []
    b0 = w_rev * sum(reserves)
    for v in range(g.n):
        for u, wf, wb in per_node[v]:
            base = w_len * (wf + wb) + (w_rev * min(wf, wb) if wf and wb else 0)
            anbr.append(u)
            awf.append(wf)
            awb.append(wb)
            abase.append(base)
            if v < u:
                b0 += base
            if (v, u) in cyc_of:
                acyc.append(cyc_of[(v, u)])
                adir.append(1)  # the on-cycle edge leaves this entry's owner
            elif (u, v) in cyc_of:
                acyc.append(cyc_of[(u, v)])
                adir.append(0)
            else:
                acyc.append(-1)
                adir.append(0)
        astart.append(len(anbr))
    return astart, anbr, awf, awb, abase, acyc, adir, reserves, b0


def _branch_order(g: Graph) -> list[int]:
    """Branching order for the value search: start at the highest-degree
    node, then always take the node with the most already-branched
    neighbors (ties: higher degree, then lower id).

    Keeping the branched prefix connected means every new node has a placed
    neighbor, so every candidate layer carries a real cost and the bound
    prunes early; branching purely by degree leaves symmetric, unanchored
    placements that blow the search up.
    """
    nbrs: list[set[int]] = [set() for _ in range(g.n)]
    for u, v in g.edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    start = max(range(g.n), key=lambda v: (g.degree(v), -v))
    order = [start]
    placed = [False] * g.n
    placed[start] = True
    anchored = [0] * g.n
    for u in nbrs[start]:
        anchored[u] += 1
    for _ in range(g.n - 1):
        v = max((x for x in range(g.n) if not placed[x]),
                key=lambda x: (anchored[x], g.degree(x), -x))
        order.append(v)
        placed[v] = True
        for u in nbrs[v]:
            anchored[u] += 1
    return order


def solve_exact(g: Graph, w: GlpWeights, budget: float | None = None,
                backend: str | None = None) -> ExactResult:
    """Provably optimal solution, or the best incumbent with a "timeout"
    status once the budget (seconds) runs out.

    Components are solved independently (each 1-based).  Among equally
    optimal layerings the lexicographically smallest assignment wins, so the
    result is deterministic.  Practical up to roughly 25 nodes; beyond that
    give it a budget.
    """
    kern = _kernels.get_backend(backend)
    deadline = math.inf if budget is None else monotonic() + budget
    if g.n == 0:
        return ExactResult(GlpSolution({}, frozenset(), 0), "optimal")

    wrev_eff = w.effective_rev(g)
    layers: Layering = {}
    timed_out = False
    for comp in g.components():
        sub, orig = g.subgraph(comp)
        limit = sub.n if w.max_layers is None else min(w.max_layers, sub.n)
        if sub.n == 1:
            layers[orig[0]] = 1
            continue
        astart, anbr, awf, awb, abase, acyc, adir, reserves, b0 = _bb_arrays(
            sub, w.w_len, wrev_eff)

        incumbent_layers: Layering | None = None
        ub = 1 << 62
        heur = solve_glp_heuristic(sub, weights=GlpWeights(w.w_len, wrev_eff))
        if w.max_layers is None or _fits(w.max_layers, heur):
            incumbent_layers = heur.layering
            ub = heur.objective

        order = _branch_order(sub)
        assign = [0] * sub.n
        best, found, completed = kern.bb_value_search(
            sub.n, astart, anbr, awf, awb, abase, acyc, adir, reserves, order,
            w.w_len, wrev_eff, limit, ub, b0, deadline, assign)
        if found:
            incumbent_layers = {v: assign[v] for v in range(sub.n)}
        if not completed:
            timed_out = True
        comp_layers: Layering | None = None
        if completed:
            lex = [0] * sub.n
            lex_found, lex_done = kern.bb_lex_search(
                sub.n, astart, anbr, awf, awb, abase, acyc, adir, reserves,
                w.w_len, wrev_eff, limit, best, b0, deadline, lex)
            if lex_found:
                comp_layers = {v: lex[v] for v in range(sub.n)}
            elif lex_done:
                raise ValueError(
                    f"no feasible layering within max_layers={w.max_layers}")
            else:
                timed_out = True
        if comp_layers is None:
            if incumbent_layers is None:
                raise ValueError(
                    "budget exhausted before any feasible layering was found "
                    f"(max_layers={w.max_layers})")
            comp_layers = canonicalize(incumbent_layers)
        for local, layer in comp_layers.items():
            layers[orig[local]] = layer
    solution = objective(g, canonicalize(layers), GlpWeights(w.w_len, w.w_rev))
    return ExactResult(solution, "timeout" if timed_out else "optimal")


def _fits(max_layers: int, solution: GlpSolution) -> bool:
    if not solution.layering:
        return True
    vals = solution.layering.values()
    return max(vals) - min(vals) + 1 <= max_layers


def brute_force_oracle(g: Graph, w: GlpWeights, backend: str | None = None) -> GlpSolution:
    """Exhaustive enumeration of every layer assignment in [1..cap]^V.

    The independent oracle for validating the solvers; refuses graphs with
    more than 8 nodes.  Ties go to the lexicographically smallest assignment.
    """
    if g.n > 8:
        raise ValueError("brute_force_oracle is limited to 8 nodes")
    if g.n == 0:
        return GlpSolution({}, frozenset(), 0)
    kern = _kernels.get_backend(backend)
    limit = g.n if w.max_layers is None else min(w.max_layers, g.n)
    cost, assign = kern.glp_enumerate(
        g.n, [e[0] for e in g.edges], [e[1] for e in g.edges], list(g.weights),
        w.w_len, w.effective_rev(g), limit, False)
    if cost is None:
        raise ValueError("no feasible assignment in the enumerated domain")
    return objective(g, {v: assign[v] for v in range(g.n)}, w)


def brute_force_min_length(g: Graph, backend: str | None = None) -> int:
    """Minimum total weighted edge length over all valid layerings with
    layers in 1..n (enumeration; oracle for the simplex module)."""
    if g.n > 8:
        raise ValueError("brute_force_min_length is limited to 8 nodes")
    if g.n == 0:
        return 0
    kern = _kernels.get_backend(backend)
    cost, _ = kern.glp_enumerate(
        g.n, [e[0] for e in g.edges], [e[1] for e in g.edges], list(g.weights),
        1, 1, g.n, True)
    if cost is None:
        raise ValueError("graph admits no valid layering (it is cyclic)")
    return cost
