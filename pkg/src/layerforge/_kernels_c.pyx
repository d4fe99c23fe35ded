# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: typed twins of the routines in ``_kernels_py``.

Same algorithms, same deterministic tie-breaking, same results bit for bit;
keep the two modules in lockstep when changing anything.
"""

from libc.stdlib cimport free, malloc
from time import monotonic

BACKEND_NAME = "c"


cdef int *_alloc_i(Py_ssize_t k) except NULL:
    cdef int *p = <int *> malloc((k if k > 0 else 1) * sizeof(int))
    if p == NULL:
        raise MemoryError()
    return p


cdef long long *_alloc_ll(Py_ssize_t k) except NULL:
    cdef long long *p = <long long *> malloc((k if k > 0 else 1) * sizeof(long long))
    if p == NULL:
        raise MemoryError()
    return p


# ---------------------------------------------------------------------------
# network simplex
# ---------------------------------------------------------------------------

cdef int _longest_path_ranks_c(int n, int m, int *src, int *dst, int *rank) except -1:
    cdef int *indeg = _alloc_i(n)
    cdef int *start = _alloc_i(n + 1)
    cdef int *adj = _alloc_i(m)
    cdef int *fill = _alloc_i(n)
    cdef int *queue = _alloc_i(n)
    cdef int i, u, v, qh, qt, ru
    try:
        for i in range(n):
            indeg[i] = 0
            rank[i] = 0
        for i in range(n + 1):
            start[i] = 0
        for i in range(m):
            indeg[dst[i]] += 1
            start[src[i] + 1] += 1
        for i in range(n):
            start[i + 1] += start[i]
            fill[i] = start[i]
        for i in range(m):
            adj[fill[src[i]]] = dst[i]
            fill[src[i]] += 1
        qh = 0
        qt = 0
        for i in range(n):
            if indeg[i] == 0:
                queue[qt] = i
                qt += 1
        while qh < qt:
            u = queue[qh]
            qh += 1
            ru = rank[u] + 1
            for i in range(start[u], start[u + 1]):
                v = adj[i]
                if rank[v] < ru:
                    rank[v] = ru
                indeg[v] -= 1
                if indeg[v] == 0:
                    queue[qt] = v
                    qt += 1
        if qh != n:
            raise ValueError("cycle in simplex kernel input")
    finally:
        free(indeg)
        free(start)
        free(adj)
        free(fill)
        free(queue)
    return 0


def simplex_component(int n, src_l, dst_l, w_l, long long cap):
    """Typed twin of _kernels_py.simplex_component."""
    cdef int m = len(src_l)
    if n == 1:
        return [0], 0, False
    cdef int *src = _alloc_i(m)
    cdef int *dst = _alloc_i(m)
    cdef long long *w = _alloc_ll(m)
    cdef int *rank = _alloc_i(n)
    cdef char *in_tree = <char *> malloc(n)
    cdef char *is_tree = <char *> malloc(m)
    # per-pivot tree adjacency (CSR rebuilt in edge-index order)
    cdef int *t_start = _alloc_i(n + 1)
    cdef int *t_fill = _alloc_i(n)
    cdef int *t_other = _alloc_i(2 * n)
    cdef int *t_edge = _alloc_i(2 * n)
    cdef long long *bal = _alloc_ll(n)
    cdef long long *sub = _alloc_ll(n)
    cdef int *parent = _alloc_i(n)
    cdef int *parent_edge = _alloc_i(n)
    cdef int *lim = _alloc_i(n)
    cdef int *low = _alloc_i(n)
    cdef int *order_by_lim = _alloc_i(n + 1)
    cdef int *stk_node = _alloc_i(n)
    cdef int *stk_ptr = _alloc_i(n)
    cdef int i, u, v, ei, nt, tcount, best_ei, counter, sp, ptr, c
    cdef int lo_c, hi_c, leave, leave_child, enter, shift
    cdef long long s, best_s, cut, leave_cut, enter_slack, delta, pivots
    cdef bint progressed, outside_is_dst, src_in_sub, x_in, y_in, crossing, capped

    try:
        for i in range(m):
            src[i] = src_l[i]
            dst[i] = dst_l[i]
            w[i] = w_l[i]
            is_tree[i] = 0
        _longest_path_ranks_c(n, m, src, dst, rank)

        for i in range(n):
            in_tree[i] = 0
        in_tree[0] = 1
        tcount = 1
        while tcount < n:
            progressed = True
            while progressed and tcount < n:
                progressed = False
                for ei in range(m):
                    if is_tree[ei]:
                        continue
                    u = src[ei]
                    v = dst[ei]
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
            best_ei = -1
            outside_is_dst = False
            for ei in range(m):
                u = src[ei]
                v = dst[ei]
                if in_tree[u] == in_tree[v]:
                    continue
                s = rank[v] - rank[u] - 1
                if best_s < 0 or s < best_s:
                    best_s = s
                    best_ei = ei
                    outside_is_dst = not in_tree[v]
            if best_ei < 0:
                raise ValueError("disconnected component in simplex kernel input")
            delta = best_s if outside_is_dst else -best_s
            for i in range(n):
                if in_tree[i]:
                    rank[i] += <int> delta

        for i in range(n):
            bal[i] = 0
        for ei in range(m):
            bal[src[ei]] += w[ei]
            bal[dst[ei]] -= w[ei]

        pivots = 0
        capped = False
        while True:
            # rebuild tree adjacency in edge-index order
            for i in range(n + 1):
                t_start[i] = 0
            for ei in range(m):
                if is_tree[ei]:
                    t_start[src[ei] + 1] += 1
                    t_start[dst[ei] + 1] += 1
            for i in range(n):
                t_start[i + 1] += t_start[i]
                t_fill[i] = t_start[i]
            for ei in range(m):
                if is_tree[ei]:
                    u = src[ei]
                    v = dst[ei]
                    t_other[t_fill[u]] = v
                    t_edge[t_fill[u]] = ei
                    t_fill[u] += 1
                    t_other[t_fill[v]] = u
                    t_edge[t_fill[v]] = ei
                    t_fill[v] += 1

            counter = 1
            parent[0] = -1
            parent_edge[0] = -1
            low[0] = counter
            stk_node[0] = 0
            stk_ptr[0] = t_start[0]
            sp = 0
            while sp >= 0:
                v = stk_node[sp]
                ptr = stk_ptr[sp]
                if ptr < t_start[v + 1]:
                    stk_ptr[sp] = ptr + 1
                    u = t_other[ptr]
                    if u == parent[v]:
                        continue
                    parent[u] = v
                    parent_edge[u] = t_edge[ptr]
                    low[u] = counter
                    sp += 1
                    stk_node[sp] = u
                    stk_ptr[sp] = t_start[u]
                else:
                    sp -= 1
                    lim[v] = counter
                    order_by_lim[counter] = v
                    counter += 1

            for i in range(n):
                sub[i] = bal[i]
            for i in range(1, n):
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
            lo_c = low[c]
            hi_c = lim[c]
            src_in_sub = lo_c <= lim[src[leave]] and lim[src[leave]] <= hi_c
            enter = -1
            enter_slack = 0
            for ei in range(m):
                if is_tree[ei]:
                    continue
                x_in = lo_c <= lim[src[ei]] and lim[src[ei]] <= hi_c
                y_in = lo_c <= lim[dst[ei]] and lim[dst[ei]] <= hi_c
                if src_in_sub:
                    crossing = (not x_in) and y_in
                else:
                    crossing = x_in and (not y_in)
                if not crossing:
                    continue
                s = rank[dst[ei]] - rank[src[ei]] - 1
                if enter < 0 or s < enter_slack:
                    enter = ei
                    enter_slack = s
            if enter < 0:
                raise ValueError("no entering edge; simplex invariant broken")

            shift = <int> (-enter_slack if src_in_sub else enter_slack)
            if shift != 0:
                for i in range(lo_c, hi_c + 1):
                    rank[order_by_lim[i]] += shift
            is_tree[leave] = 0
            is_tree[enter] = 1
            pivots += 1

        if capped:
            _longest_path_ranks_c(n, m, src, dst, rank)
        u = rank[0]
        for i in range(1, n):
            if rank[i] < u:
                u = rank[i]
        out = [0] * n
        for i in range(n):
            out[i] = rank[i] - u
        return out, int(pivots), capped
    finally:
        free(src); free(dst); free(w); free(rank)
        free(in_tree); free(is_tree)
        free(t_start); free(t_fill); free(t_other); free(t_edge)
        free(bal); free(sub); free(parent); free(parent_edge)
        free(lim); free(low); free(order_by_lim); free(stk_node); free(stk_ptr)


# ---------------------------------------------------------------------------
# exhaustive enumeration oracle
# ---------------------------------------------------------------------------

def glp_enumerate(int n, src_l, dst_l, w_l, long long wlen, long long wrev,
                  int limit, bint valid_only):
    """Typed twin of _kernels_py.glp_enumerate.

    Walks [1..limit]^n as a depth-first odometer with prefix costs.  Prefix
    costs only grow (every placed edge costs at least wlen), so skipping a
    prefix that already matches or exceeds the best leaf cannot drop a better
    or lexicographically earlier minimum.
    """
    cdef int m = len(src_l)
    cdef int *esrc = _alloc_i(m)
    cdef int *edst = _alloc_i(m)
    cdef long long *ew = _alloc_ll(m)
    cdef int *lv_start = _alloc_i(n + 1)
    cdef int *lv_edge = _alloc_i(m)
    cdef int *fill = _alloc_i(n)
    cdef int *digit = _alloc_i(n)
    cdef long long *prefix = _alloc_ll(n + 1)
    cdef int *best_digit = _alloc_i(n)
    cdef int i, k, level, later
    cdef long long cost, best_cost, diff
    cdef bint have_best = False, ok
    try:
        for k in range(m):
            esrc[k] = src_l[k]
            edst[k] = dst_l[k]
            ew[k] = w_l[k]
        for i in range(n + 1):
            lv_start[i] = 0
        for k in range(m):
            later = esrc[k] if esrc[k] > edst[k] else edst[k]
            lv_start[later + 1] += 1
        for i in range(n):
            lv_start[i + 1] += lv_start[i]
            fill[i] = lv_start[i]
        for k in range(m):
            later = esrc[k] if esrc[k] > edst[k] else edst[k]
            lv_edge[fill[later]] = k
            fill[later] += 1

        best_cost = 0
        for i in range(n):
            digit[i] = 0
        prefix[0] = 0
        level = 0
        while level >= 0:
            digit[level] += 1
            if digit[level] > limit:
                level -= 1
                continue
            cost = prefix[level]
            ok = True
            for i in range(lv_start[level], lv_start[level + 1]):
                k = lv_edge[i]
                diff = digit[edst[k]] - digit[esrc[k]]
                if valid_only:
                    if diff < 1:
                        ok = False
                        break
                    cost += wlen * ew[k] * diff
                else:
                    if diff == 0:
                        ok = False
                        break
                    cost += wlen * ew[k] * (diff if diff > 0 else -diff)
                    if diff < 0:
                        cost += wrev * ew[k]
            if not ok:
                continue
            if have_best and cost >= best_cost:
                continue
            if level == n - 1:
                best_cost = cost
                have_best = True
                for i in range(n):
                    best_digit[i] = digit[i]
                continue
            prefix[level + 1] = cost
            level += 1
            digit[level] = 0
        if not have_best:
            return None, None
        out = [0] * n
        for i in range(n):
            out[i] = best_digit[i]
        return int(best_cost), out
    finally:
        free(esrc); free(edst); free(ew)
        free(lv_start); free(lv_edge); free(fill)
        free(digit); free(prefix); free(best_digit)



# ---------------------------------------------------------------------------
# branch and bound searches
# ---------------------------------------------------------------------------

cdef class _BBState:
    cdef int n, limit, tick, ncyc, rel_sp
    cdef long long wlen, wrev, best, target, sim_gen
    cdef bint found, aborted
    cdef double deadline
    cdef int *astart
    cdef int *anbr
    cdef long long *awf
    cdef long long *awb
    cdef long long *abase
    cdef int *acyc
    cdef char *adir
    cdef long long *reserves
    cdef char *released
    cdef long long *sim_mark
    cdef int *rel_flat
    cdef int *order
    cdef int *layer
    cdef char *assigned
    cdef int *out
    cdef int *cand_d
    cdef long long *cand_delta

    def __cinit__(self, int n, astart_l, anbr_l, awf_l, awb_l, abase_l,
                  acyc_l, adir_l, reserves_l,
                  long long wlen, long long wrev, int limit, double deadline):
        cdef Py_ssize_t asz = len(anbr_l)
        cdef int i
        self.n = n
        self.limit = limit
        self.wlen = wlen
        self.wrev = wrev
        self.deadline = deadline
        self.tick = 0
        self.found = False
        self.aborted = False
        self.best = 0
        self.target = 0
        self.sim_gen = 0
        self.rel_sp = 0
        self.ncyc = len(reserves_l)
        self.astart = _alloc_i(n + 1)
        self.anbr = _alloc_i(asz)
        self.awf = _alloc_ll(asz)
        self.awb = _alloc_ll(asz)
        self.abase = _alloc_ll(asz)
        self.acyc = _alloc_i(asz)
        self.adir = <char *> malloc(asz if asz > 0 else 1)
        self.reserves = _alloc_ll(self.ncyc)
        self.released = <char *> malloc(self.ncyc if self.ncyc > 0 else 1)
        self.sim_mark = _alloc_ll(self.ncyc)
        self.rel_flat = _alloc_i(self.ncyc)
        self.order = _alloc_i(n)
        self.layer = _alloc_i(n)
        self.assigned = <char *> malloc(n if n > 0 else 1)
        self.out = _alloc_i(n)
        self.cand_d = _alloc_i(n * (2 * limit + 1))
        self.cand_delta = _alloc_ll(n * (2 * limit + 1))
        for i in range(n + 1):
            self.astart[i] = astart_l[i]
        for i in range(asz):
            self.anbr[i] = anbr_l[i]
            self.awf[i] = awf_l[i]
            self.awb[i] = awb_l[i]
            self.abase[i] = abase_l[i]
            self.acyc[i] = acyc_l[i]
            self.adir[i] = adir_l[i]
        for i in range(self.ncyc):
            self.reserves[i] = reserves_l[i]
            self.released[i] = 0
            self.sim_mark[i] = 0
        for i in range(n):
            self.assigned[i] = 0
            self.layer[i] = 0
            self.order[i] = i

    def __dealloc__(self):
        free(self.astart); free(self.anbr); free(self.awf); free(self.awb)
        free(self.abase); free(self.acyc); free(self.reserves)
        free(self.sim_mark); free(self.rel_flat)
        free(self.order); free(self.layer); free(self.out)
        free(self.cand_d); free(self.cand_delta)
        if self.adir != NULL:
            free(self.adir)
        if self.released != NULL:
            free(self.released)
        if self.assigned != NULL:
            free(self.assigned)

    cdef bint check_deadline(self):
        self.tick += 1
        if self.tick >= 2048:
            self.tick = 0
            if monotonic() > self.deadline:
                self.aborted = True
        return self.aborted

    cdef long long candidate_delta(self, int v, int d, bint assigned_only,
                                   bint *ok):
        """Bound delta of placing v at d: per decided pair, exact cost minus
        base share, minus any cycle reserve this decision releases."""
        cdef long long delta = 0
        cdef int j, u, du, c, rev_dir
        cdef long long wf, wb
        self.sim_gen += 1
        ok[0] = True
        for j in range(self.astart[v], self.astart[v + 1]):
            u = self.anbr[j]
            if assigned_only:
                if not self.assigned[u]:
                    continue
            elif u >= v:
                continue
            du = self.layer[u]
            if d == du:
                ok[0] = False
                return 0
            wf = self.awf[j]
            wb = self.awb[j]
            if d > du:
                delta += self.wlen * (wf + wb) * (d - du) + self.wrev * wf - self.abase[j]
                rev_dir = 1
            else:
                delta += self.wlen * (wf + wb) * (du - d) + self.wrev * wb - self.abase[j]
                rev_dir = 0
            c = self.acyc[j]
            if c >= 0 and not self.released[c] and self.sim_mark[c] != self.sim_gen \
                    and self.adir[j] == rev_dir:
                self.sim_mark[c] = self.sim_gen
                delta -= self.wrev * self.reserves[c]
        return delta

    cdef int commit_releases(self, int v, int d, bint assigned_only):
        cdef int mark = self.rel_sp
        cdef int j, u, du, c, rev_dir
        for j in range(self.astart[v], self.astart[v + 1]):
            u = self.anbr[j]
            if assigned_only:
                if not self.assigned[u]:
                    continue
            elif u >= v:
                continue
            du = self.layer[u]
            rev_dir = 1 if d > du else 0
            c = self.acyc[j]
            if c >= 0 and not self.released[c] and self.adir[j] == rev_dir:
                self.released[c] = 1
                self.rel_flat[self.rel_sp] = c
                self.rel_sp += 1
        return mark

    cdef void rewind_releases(self, int mark):
        while self.rel_sp > mark:
            self.rel_sp -= 1
            self.released[self.rel_flat[self.rel_sp]] = 0

    cdef void value_rec(self, int level, long long bound, int min_a, int max_a):
        if self.check_deadline():
            return
        cdef int v = self.order[level]
        cdef int base = level * (2 * self.limit + 1)
        cdef int ncand = 0
        cdef int d, pos, idx, i, mark
        cdef long long delta, nbound
        cdef bint okc, last
        for d in range(max_a - self.limit + 1, min_a + self.limit):
            delta = self.candidate_delta(v, d, True, &okc)
            if not okc:
                continue
            # insertion sort by (delta, d); d ascending keeps ties stable
            pos = ncand
            while pos > 0 and self.cand_delta[base + pos - 1] > delta:
                self.cand_delta[base + pos] = self.cand_delta[base + pos - 1]
                self.cand_d[base + pos] = self.cand_d[base + pos - 1]
                pos -= 1
            self.cand_delta[base + pos] = delta
            self.cand_d[base + pos] = d
            ncand += 1
        last = level == self.n - 1
        for idx in range(ncand):
            delta = self.cand_delta[base + idx]
            d = self.cand_d[base + idx]
            nbound = bound + delta
            if nbound >= self.best:
                break
            self.layer[v] = d
            if last:
                self.best = nbound
                self.found = True
                for i in range(self.n):
                    self.out[i] = self.layer[i]
            else:
                mark = self.commit_releases(v, d, True)
                self.assigned[v] = 1
                self.value_rec(level + 1, nbound,
                               d if d < min_a else min_a,
                               d if d > max_a else max_a)
                self.assigned[v] = 0
                self.rewind_releases(mark)
                if self.aborted:
                    return

    cdef bint lex_rec(self, int v, long long bound):
        if self.check_deadline():
            return False
        cdef int i, d, mark
        cdef long long delta
        cdef bint okc
        if v == self.n:
            for i in range(self.n):
                self.out[i] = self.layer[i]
            return True
        for d in range(1, self.limit + 1):
            delta = self.candidate_delta(v, d, False, &okc)
            if not okc or bound + delta > self.target:
                continue
            self.layer[v] = d
            mark = self.commit_releases(v, d, False)
            if self.lex_rec(v + 1, bound + delta):
                return True
            self.rewind_releases(mark)
            if self.aborted:
                return False
        return False


def bb_value_search(int n, astart_l, anbr_l, awf_l, awb_l, abase_l, acyc_l,
                    adir_l, reserves_l, order_l,
                    long long wlen, long long wrev, int limit, long long ub,
                    long long b0, double deadline, assign_out):
    """Typed twin of _kernels_py.bb_value_search."""
    cdef int i
    if n == 1:
        assign_out[0] = 0
        return (ub if ub < b0 else b0), b0 < ub, True
    cdef _BBState st = _BBState(n, astart_l, anbr_l, awf_l, awb_l, abase_l,
                                acyc_l, adir_l, reserves_l,
                                wlen, wrev, limit, deadline)
    for i in range(n):
        st.order[i] = order_l[i]
    st.best = ub
    st.assigned[st.order[0]] = 1
    st.layer[st.order[0]] = 0
    st.value_rec(1, b0, 0, 0)
    if st.found:
        for i in range(n):
            assign_out[i] = st.out[i]
    return int(st.best), bool(st.found), not st.aborted


def bb_lex_search(int n, astart_l, anbr_l, awf_l, awb_l, abase_l, acyc_l,
                  adir_l, reserves_l,
                  long long wlen, long long wrev, int limit, long long target,
                  long long b0, double deadline, assign_out):
    """Typed twin of _kernels_py.bb_lex_search."""
    cdef _BBState st = _BBState(n, astart_l, anbr_l, awf_l, awb_l, abase_l,
                                acyc_l, adir_l, reserves_l,
                                wlen, wrev, limit, deadline)
    st.target = target
    cdef bint found = st.lex_rec(0, b0)
    cdef int i
    if found:
        for i in range(n):
            assign_out[i] = st.out[i]
    return bool(found), not st.aborted
