"""Pure-Python kernels: the hot inner loops behind the public solvers.

This module is the fallback twin of the compiled ``_kernels_c`` extension.
Both implement the same algorithms with the same deterministic tie-breaking,
so results are identical bit for bit; only the speed differs.  Keep the two
in lockstep when changing anything here.
"""

from __future__ import annotations

from time import monotonic

import numpy as np

BACKEND_NAME = "python"

_HUGE = 1 << 60


# ---------------------------------------------------------------------------
# network simplex: minimum weighted edge length ranking of a connected DAG
# ---------------------------------------------------------------------------

def _longest_path_ranks(n: int, src: list[int], dst: list[int]) -> list[int]:
    indeg = [0] * n
    out: list[list[int]] = [[] for _ in range(n)]
    for i in range(len(src)):
        out[src[i]].append(dst[i])
        indeg[dst[i]] += 1
    rank = [0] * n
    queue = [v for v in range(n) if indeg[v] == 0]
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        ru = rank[u] + 1
        for v in out[u]:
            if rank[v] < ru:
                rank[v] = ru
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    if head != n:
        raise ValueError("cycle in simplex kernel input")
    return rank


def simplex_component(n: int, src: list[int], dst: list[int], w: list[int],
                      cap: int) -> tuple[list[int], int, bool]:
    """Minimum total weighted edge length ranks for one weakly connected DAG.

    Pivot rule: leave the tree edge with the most negative cut value (lowest
    edge index on ties), enter the crossing edge of minimum slack (lowest
    index on ties).  Returns (ranks normalized to min 0, pivots, capped);
    when the pivot cap fires the longest-path ranks are returned instead.
    """
    m = len(src)
    if n == 1:
        return [0], 0, False
    rank = _longest_path_ranks(n, src, dst)

    # grow a spanning tree of tight (slack 0) edges, shifting the tree toward
    # the nearest non-tree edge whenever it stalls
    in_tree = bytearray(n)
    in_tree[0] = 1
    tcount = 1
    is_tree = bytearray(m)
    while tcount < n:
        progressed = True
        while progressed and tcount < n:
            progressed = False
            for ei in range(m):
                if is_tree[ei]:
                    continue
                u, v = src[ei], dst[ei]
                if in_tree[u] == in_tree[v]:
                    continue
                if rank[v] - rank[u] == 1:
                    is_tree[ei] = 1
                    nt = v if not in_tree[v] else u
                    in_tree[nt] = 1
                    tcount += 1
                    progressed = True
        if tcount == n:
            break
        best_s = -1
        outside_is_dst = False
        for ei in range(m):
            u, v = src[ei], dst[ei]
            if in_tree[u] == in_tree[v]:
                continue
            s = rank[v] - rank[u] - 1
            if best_s < 0 or s < best_s:
                best_s = s
                outside_is_dst = not in_tree[v]
        if best_s < 0:
            raise ValueError("disconnected component in simplex kernel input")
        delta = best_s if outside_is_dst else -best_s
        for x in range(n):
            if in_tree[x]:
                rank[x] += delta

    # per-node weighted out-minus-in balance; subtree sums of it give every
    # tree edge's cut value in one leaves-to-root pass
    bal = [0] * n
    for ei in range(m):
        bal[src[ei]] += w[ei]
        bal[dst[ei]] -= w[ei]

    parent = [-1] * n
    parent_edge = [-1] * n
    lim = [0] * n
    low = [0] * n
    order_by_lim = [0] * (n + 1)
    pivots = 0
    capped = False
    while True:
        # tree adjacency rebuilt per pivot in edge-index order, so the DFS
        # child order is deterministic and shared with the compiled twin
        tree_adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for ei in range(m):
            if is_tree[ei]:
                tree_adj[src[ei]].append((dst[ei], ei))
                tree_adj[dst[ei]].append((src[ei], ei))
        # iterative DFS from node 0 over the tree: low = entry counter,
        # lim = postorder counter, children visited in adjacency order
        counter = 1
        stack = [(0, 0)]
        parent[0] = -1
        parent_edge[0] = -1
        low[0] = counter
        while stack:
            v, ptr = stack[-1]
            if ptr < len(tree_adj[v]):
                stack[-1] = (v, ptr + 1)
                u, ei = tree_adj[v][ptr]
                if u == parent[v]:
                    continue
                parent[u] = v
                parent_edge[u] = ei
                low[u] = counter
                stack.append((u, 0))
            else:
                stack.pop()
                lim[v] = counter
                order_by_lim[counter] = v
                counter += 1

        sub = bal[:]
        for i in range(1, n):  # postorder: children before parents; skips root (lim n)
            v = order_by_lim[i]
            sub[parent[v]] += sub[v]

        leave = -1
        leave_cut = 0
        leave_child = -1
        for i in range(1, n + 1):
            v = order_by_lim[i]
            ei = parent_edge[v]
            if ei < 0:
                continue
            cut = sub[v] if src[ei] == v else -sub[v]
            if cut < 0 and (leave < 0 or cut < leave_cut
                            or (cut == leave_cut and ei < leave)):
                leave = ei
                leave_cut = cut
                leave_child = v
        if leave < 0:
            break
        if pivots >= cap:
            capped = True
            break

        c = leave_child
        lo_c, hi_c = low[c], lim[c]
        src_in_sub = lo_c <= lim[src[leave]] <= hi_c
        enter = -1
        enter_slack = 0
        for ei in range(m):
            if is_tree[ei]:
                continue
            x_in = lo_c <= lim[src[ei]] <= hi_c
            y_in = lo_c <= lim[dst[ei]] <= hi_c
            if src_in_sub:
                crossing = (not x_in) and y_in
            else:
                crossing = x_in and not y_in
            if not crossing:
                continue
            s = rank[dst[ei]] - rank[src[ei]] - 1
            if enter < 0 or s < enter_slack:
                enter = ei
                enter_slack = s
        if enter < 0:
            raise ValueError("no entering edge; simplex invariant broken")

        shift = -enter_slack if src_in_sub else enter_slack
        if shift != 0:
            for i in range(lo_c, hi_c + 1):
                rank[order_by_lim[i]] += shift
        is_tree[leave] = 0
        is_tree[enter] = 1
        pivots += 1

    if capped:
        rank = _longest_path_ranks(n, src, dst)
    base = min(rank)
    return [r - base for r in rank], pivots, capped


# ---------------------------------------------------------------------------
# exhaustive enumeration over all layer assignments (test oracle)
# ---------------------------------------------------------------------------

def glp_enumerate(n: int, src: list[int], dst: list[int], w: list[int],
                  wlen: int, wrev: int, limit: int,
                  valid_only: bool) -> tuple[int | None, list[int] | None]:
    """Evaluate every assignment in ``[1..limit]^n`` and return the minimum
    cost with its lexicographically smallest argmin.

    Assignments placing both endpoints of any edge on the same layer are
    excluded.  ``valid_only`` additionally restricts to assignments where
    every edge strictly increases (cost is then pure length); otherwise
    reversed edges cost ``wrev`` each on top of the length term.
    """
    m = len(src)
    total = limit ** n
    chunk = min(total, 1 << 19)
    powers = [limit ** (n - 1 - j) for j in range(n)]
    src_a = np.asarray(src, dtype=np.int64)
    dst_a = np.asarray(dst, dtype=np.int64)
    w_a = np.asarray(w, dtype=np.int64)
    best_cost: int | None = None
    best_idx = -1
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        cols = np.empty((n, len(idx)), dtype=np.int64)
        for j in range(n):
            cols[j] = (idx // powers[j]) % limit
        cost = np.zeros(len(idx), dtype=np.int64)
        ok = np.ones(len(idx), dtype=bool)
        for k in range(m):
            diff = cols[dst_a[k]] - cols[src_a[k]]
            if valid_only:
                ok &= diff >= 1
                cost += (wlen * w_a[k]) * diff
            else:
                ok &= diff != 0
                cost += (wlen * w_a[k]) * np.abs(diff)
                cost += (wrev * w_a[k]) * (diff < 0)
        if not ok.any():
            continue
        cost = np.where(ok, cost, _HUGE)
        i = int(np.argmin(cost))
        c = int(cost[i])
        if best_cost is None or c < best_cost:
            best_cost = c
            best_idx = int(idx[i])
    if best_cost is None or best_cost >= _HUGE:
        return None, None
    assign = [(best_idx // powers[j]) % limit + 1 for j in range(n)]
    return best_cost, assign


# ---------------------------------------------------------------------------
# branch and bound over layer assignments (exact solver)
# ---------------------------------------------------------------------------
#
# Adjacency comes flattened: for node v, entries astart[v]..astart[v+1] hold
# the distinct neighbors anbr[j] with awf[j] = total weight of edges v->u,
# awb[j] = total weight of edges u->v, and abase[j] = the pair's share of the
# initial bound (wlen*(wf+wb), plus wrev*min(wf, wb) when both directions
# exist, since one of them must end up reversed).
#
# acyc[j] >= 0 ties the pair to an edge-disjoint directed cycle: every cycle
# must contain at least one reversed edge, so the bound carries a
# wrev*reserve[c] reserve per cycle until some cycle pair is decided
# reversed (adir[j] says which direction lies on the cycle).  b0 already
# includes all pair bases and cycle reserves.


class _BB:
    """Shared machinery of the value and lex searches."""

    def __init__(self, n, astart, anbr, awf, awb, abase, acyc, adir,
                 reserves, wlen, wrev, limit, deadline):
        self.n = n
        self.astart = astart
        self.anbr = anbr
        self.awf = awf
        self.awb = awb
        self.abase = abase
        self.acyc = acyc
        self.adir = adir
        self.reserves = reserves
        self.wlen = wlen
        self.wrev = wrev
        self.limit = limit
        self.deadline = deadline
        self.layer = [0] * n
        self.assigned = bytearray(n)
        self.released = bytearray(len(reserves))
        self.sim_mark = [0] * len(reserves)
        self.sim_gen = 0
        self.rel_flat = [0] * len(reserves)
        self.rel_sp = 0
        self.tick = 0
        self.aborted = False

    def expired(self) -> bool:
        self.tick += 1
        if self.tick >= 2048:
            self.tick = 0
            if monotonic() > self.deadline:
                self.aborted = True
        return self.aborted

    def pair_delta(self, j: int, d: int, du: int) -> int:
        """Exact cost of the pair at distance |d - du| minus its base share,
        plus any cycle reserve this decision releases (simulation-marked)."""
        wf, wb = self.awf[j], self.awb[j]
        if d > du:
            delta = self.wlen * (wf + wb) * (d - du) + self.wrev * wf - self.abase[j]
            rev_dir = 1
        else:
            delta = self.wlen * (wf + wb) * (du - d) + self.wrev * wb - self.abase[j]
            rev_dir = 0
        c = self.acyc[j]
        if c >= 0 and not self.released[c] and self.sim_mark[c] != self.sim_gen \
                and self.adir[j] == rev_dir:
            self.sim_mark[c] = self.sim_gen
            delta -= self.wrev * self.reserves[c]
        return delta

    def candidate_delta(self, v: int, d: int, assigned_only: bool) -> int | None:
        """Total bound delta of placing v at d, or None if infeasible;
        ``assigned_only`` distinguishes the value search (explicit assigned
        flags) from the lex search (ids below v are assigned)."""
        self.sim_gen += 1
        delta = 0
        for j in range(self.astart[v], self.astart[v + 1]):
            u = self.anbr[j]
            if (assigned_only and not self.assigned[u]) or (not assigned_only and u >= v):
                continue
            du = self.layer[u]
            if d == du:
                return None
            delta += self.pair_delta(j, d, du)
        return delta

    def commit_releases(self, v: int, d: int, assigned_only: bool) -> int:
        """Mark the cycle reserves released by placing v at d; returns the
        rel_flat watermark to rewind on backtrack."""
        mark = self.rel_sp
        for j in range(self.astart[v], self.astart[v + 1]):
            u = self.anbr[j]
            if (assigned_only and not self.assigned[u]) or (not assigned_only and u >= v):
                continue
            du = self.layer[u]
            rev_dir = 1 if d > du else 0
            c = self.acyc[j]
            if c >= 0 and not self.released[c] and self.adir[j] == rev_dir:
                self.released[c] = 1
                self.rel_flat[self.rel_sp] = c
                self.rel_sp += 1
        return mark

    def rewind_releases(self, mark: int) -> None:
        while self.rel_sp > mark:
            self.rel_sp -= 1
            self.released[self.rel_flat[self.rel_sp]] = 0


def bb_value_search(n, astart, anbr, awf, awb, abase, acyc, adir, reserves,
                    order, wlen, wrev, limit, ub, b0, deadline,
                    assign_out) -> tuple[int, bool, bool]:
    """Depth-first value search over shift-normalized assignments.

    Nodes are branched in ``order`` (first one pinned to relative layer 0),
    candidate layers tried cheapest first.  Returns (best value, whether a
    strictly better assignment than ``ub`` was found and stored in
    ``assign_out``, whether the search ran to completion).
    """
    if n == 1:
        assign_out[0] = 0
        return min(ub, b0), b0 < ub, True
    bb = _BB(n, astart, anbr, awf, awb, abase, acyc, adir, reserves,
             wlen, wrev, limit, deadline)
    bb.assigned[order[0]] = 1
    state = [ub, False]  # best, found

    def rec(level: int, bound: int, min_a: int, max_a: int) -> None:
        if bb.expired():
            return
        v = order[level]
        cands = []
        for d in range(max_a - limit + 1, min_a + limit):
            delta = bb.candidate_delta(v, d, True)
            if delta is not None:
                cands.append((delta, d))
        cands.sort()
        last = level == n - 1
        for delta, d in cands:
            nbound = bound + delta
            if nbound >= state[0]:
                break  # sorted ascending: the rest cannot beat the best
            bb.layer[v] = d
            if last:
                state[0] = nbound
                state[1] = True
                assign_out[:] = bb.layer
            else:
                mark = bb.commit_releases(v, d, True)
                bb.assigned[v] = 1
                rec(level + 1, nbound,
                    d if d < min_a else min_a, d if d > max_a else max_a)
                bb.assigned[v] = 0
                bb.rewind_releases(mark)
                if bb.aborted:
                    return

    rec(1, b0, 0, 0)
    return state[0], state[1], not bb.aborted


def bb_lex_search(n, astart, anbr, awf, awb, abase, acyc, adir, reserves,
                  wlen, wrev, limit, target, b0, deadline,
                  assign_out) -> tuple[bool, bool]:
    """Find the lexicographically smallest assignment in ``[1..limit]^n``
    whose cost equals ``target`` (the known optimum).

    Nodes are placed in id order trying layers ascending, so the first full
    assignment reached is the lexicographic minimum.  Returns (found,
    completed).
    """
    bb = _BB(n, astart, anbr, awf, awb, abase, acyc, adir, reserves,
             wlen, wrev, limit, deadline)

    def rec(v: int, bound: int) -> bool:
        if bb.expired():
            return False
        if v == n:
            assign_out[:] = bb.layer
            return True
        for d in range(1, limit + 1):
            delta = bb.candidate_delta(v, d, False)
            if delta is None or bound + delta > target:
                continue
            bb.layer[v] = d
            mark = bb.commit_releases(v, d, False)
            if rec(v + 1, bound + delta):
                return True
            bb.rewind_releases(mark)
            if bb.aborted:
                return False
        return False

    found = rec(0, b0)
    return found, not bb.aborted
