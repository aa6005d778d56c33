"""Exact maximum-weight perfect matching on dense graphs (blossom, O(n^3)).

Primal-dual blossom algorithm over flat int arrays so it JIT-compiles.
Vertices are 1-based with 0 as the null sentinel; ids above n denote
shrunken blossoms. The public entry point is min_weight_perfect_matching,
which negates against a constant so that, with strictly positive
transformed weights, the maximum-weight matching is perfect and minimizes
the original total weight.

State arrays (capacity 2n + 2 ids):
  gw/gu/gv    blossom-level adjacency: weight and the real endpoints
              realizing the connection between two super-nodes
  lab         dual variables (vertices and blossoms)
  match       matched real endpoint of each node's matched edge
  st          top-level super-node containing each id
  pa          parent edge endpoint in the alternating forest
  flower      sub-component lists of each blossom (+ flower_len)
  flower_from flower_from[b][u] = sub-component of b containing real u
  S           forest label: 0 outer, 1 inner, -1 free
  slack       per super-node, the real outer vertex of minimum slack
"""

from __future__ import annotations

import numpy as np
from numba import njit

INF = np.int64(1) << np.int64(60)


@njit(cache=True, inline="always")
def _delta(lab, gw, u, v):
    # slack of a real-endpoint edge; weights are doubled inside the duals
    return lab[u] + lab[v] - gw[u, v] * 2


@njit(cache=True, inline="always")
def _update_slack(lab, gw, gu, gv, slack, u, x):
    if slack[x] == 0 or _delta(lab, gw, gu[u, x], gv[u, x]) < _delta(
        lab, gw, gu[slack[x], x], gv[slack[x], x]
    ):
        slack[x] = u


@njit(cache=True)
def _set_slack(lab, gw, gu, gv, slack, st, S, n, x):
    slack[x] = 0
    for u in range(1, n + 1):
        if gw[u, x] > 0 and st[u] != x and S[st[u]] == 0:
            _update_slack(lab, gw, gu, gv, slack, u, x)


@njit(cache=True)
def _q_push(queue, qtail, flower, flower_len, n, x):
    # template order: DFS over sub-components, real vertices enqueued
    stack = np.empty(2 * flower.shape[0] + 2, np.int64)
    top = 0
    stack[0] = x
    top = 1
    while top > 0:
        top -= 1
        y = stack[top]
        if y <= n:
            if qtail[0] >= queue.shape[0]:
                raise RuntimeError("blossom queue overflow")
            queue[qtail[0]] = y
            qtail[0] += 1
        else:
            for i in range(flower_len[y] - 1, -1, -1):
                stack[top] = flower[y, i]
                top += 1
    return


@njit(cache=True)
def _set_st(st, flower, flower_len, n, x, b):
    stack = np.empty(2 * flower.shape[0] + 2, np.int64)
    stack[0] = x
    top = 1
    while top > 0:
        top -= 1
        y = stack[top]
        st[y] = b
        if y > n:
            for i in range(flower_len[y]):
                stack[top] = flower[y, i]
                top += 1


@njit(cache=True)
def _get_pr(flower, flower_len, b, xr):
    pr = 0
    for i in range(flower_len[b]):
        if flower[b, i] == xr:
            pr = i
            break
    if pr % 2 == 1:
        # reverse flower[b][1:] so the base path has even length
        lo = 1
        hi = flower_len[b] - 1
        while lo < hi:
            tmp = flower[b, lo]
            flower[b, lo] = flower[b, hi]
            flower[b, hi] = tmp
            lo += 1
            hi -= 1
        return flower_len[b] - pr
    return pr


@njit(cache=True)
def _set_match(match, gu, gv, flower, flower_len, flower_from, n, u, v):
    match[u] = gv[u, v]
    if u <= n:
        return
    eu = gu[u, v]
    xr = flower_from[u, eu]
    pr = _get_pr(flower, flower_len, u, xr)
    for i in range(pr):
        _set_match(match, gu, gv, flower, flower_len, flower_from, n, flower[u, i], flower[u, i ^ 1])
    _set_match(match, gu, gv, flower, flower_len, flower_from, n, xr, v)
    # rotate flower[u] left by pr so xr becomes the base
    if pr > 0:
        ln = flower_len[u]
        buf = np.empty(ln, np.int64)
        for i in range(ln):
            buf[i] = flower[u, (i + pr) % ln]
        for i in range(ln):
            flower[u, i] = buf[i]


@njit(cache=True)
def _augment(match, st, pa, gu, gv, flower, flower_len, flower_from, n, u, v):
    while True:
        xnv = st[match[u]]
        _set_match(match, gu, gv, flower, flower_len, flower_from, n, u, v)
        if xnv == 0:
            return
        _set_match(match, gu, gv, flower, flower_len, flower_from, n, xnv, st[pa[xnv]])
        u = st[pa[xnv]]
        v = xnv


@njit(cache=True)
def _get_lca(vis, tstamp, st, match, pa, u, v):
    tstamp[0] += 1
    t = tstamp[0]
    while u != 0 or v != 0:
        if u != 0:
            if vis[u] == t:
                return u
            vis[u] = t
            u = st[match[u]]
            if u != 0:
                u = st[pa[u]]
        tmp = u
        u = v
        v = tmp
    return 0


@njit(cache=True)
def _add_blossom(
    gw, gu, gv, lab, match, st, pa, S, slack, flower, flower_len, flower_from,
    queue, qtail, n, n_x, u, lca, v,
):
    b = n + 1
    while b <= n_x[0] and st[b] != 0:
        b += 1
    if b > n_x[0]:
        n_x[0] += 1
    lab[b] = 0
    S[b] = 0
    match[b] = match[lca]
    cnt = 0
    flower[b, cnt] = lca
    cnt += 1
    x = u
    while x != lca:
        flower[b, cnt] = x
        cnt += 1
        y = st[match[x]]
        flower[b, cnt] = y
        cnt += 1
        _q_push(queue, qtail, flower, flower_len, n, y)
        x = st[pa[y]]
    # reverse flower[b][1:cnt]
    lo = 1
    hi = cnt - 1
    while lo < hi:
        tmp = flower[b, lo]
        flower[b, lo] = flower[b, hi]
        flower[b, hi] = tmp
        lo += 1
        hi -= 1
    x = v
    while x != lca:
        flower[b, cnt] = x
        cnt += 1
        y = st[match[x]]
        flower[b, cnt] = y
        cnt += 1
        _q_push(queue, qtail, flower, flower_len, n, y)
        x = st[pa[y]]
    flower_len[b] = cnt
    _set_st(st, flower, flower_len, n, b, b)
    for x in range(1, n_x[0] + 1):
        gw[b, x] = 0
        gw[x, b] = 0
    for x in range(1, n + 1):
        flower_from[b, x] = 0
    for i in range(flower_len[b]):
        xx = flower[b, i]
        for x in range(1, n_x[0] + 1):
            if gw[b, x] == 0 or _delta(lab, gw, gu[xx, x], gv[xx, x]) < _delta(
                lab, gw, gu[b, x], gv[b, x]
            ):
                gw[b, x] = gw[xx, x]
                gu[b, x] = gu[xx, x]
                gv[b, x] = gv[xx, x]
                gw[x, b] = gw[x, xx]
                gu[x, b] = gu[x, xx]
                gv[x, b] = gv[x, xx]
        for x in range(1, n + 1):
            if flower_from[xx, x] != 0:
                flower_from[b, x] = xx
    _set_slack(lab, gw, gu, gv, slack, st, S, n, b)


@njit(cache=True)
def _expand_blossom(
    gw, gu, gv, lab, match, st, pa, S, slack, flower, flower_len, flower_from,
    queue, qtail, n, b,
):
    for i in range(flower_len[b]):
        _set_st(st, flower, flower_len, n, flower[b, i], flower[b, i])
    xr = flower_from[b, gu[b, pa[b]]]
    pr = _get_pr(flower, flower_len, b, xr)
    i = 0
    while i < pr:
        xs = flower[b, i]
        xns = flower[b, i + 1]
        pa[xs] = gu[xns, xs]
        S[xs] = 1
        S[xns] = 0
        slack[xs] = 0
        _set_slack(lab, gw, gu, gv, slack, st, S, n, xns)
        _q_push(queue, qtail, flower, flower_len, n, xns)
        i += 2
    S[xr] = 1
    pa[xr] = pa[b]
    for i in range(pr + 1, flower_len[b]):
        xs = flower[b, i]
        S[xs] = -1
        _set_slack(lab, gw, gu, gv, slack, st, S, n, xs)
    st[b] = 0


@njit(cache=True)
def _on_found_edge(
    gw, gu, gv, lab, match, st, pa, S, slack, flower, flower_len, flower_from,
    queue, qtail, vis, tstamp, n, n_x, eu, ev,
):
    """Returns 1 if an augmenting path was applied."""
    u = st[eu]
    v = st[ev]
    if S[v] == -1:
        pa[v] = eu
        S[v] = 1
        nu = st[match[v]]
        slack[v] = 0
        slack[nu] = 0
        S[nu] = 0
        _q_push(queue, qtail, flower, flower_len, n, nu)
    elif S[v] == 0:
        lca = _get_lca(vis, tstamp, st, match, pa, u, v)
        if lca == 0:
            _augment(match, st, pa, gu, gv, flower, flower_len, flower_from, n, u, v)
            _augment(match, st, pa, gu, gv, flower, flower_len, flower_from, n, v, u)
            return 1
        else:
            _add_blossom(
                gw, gu, gv, lab, match, st, pa, S, slack, flower, flower_len,
                flower_from, queue, qtail, n, n_x, u, lca, v,
            )
    return 0


@njit(cache=True)
def _matching_phase(
    gw, gu, gv, lab, match, st, pa, S, slack, flower, flower_len, flower_from,
    queue, qtail, vis, tstamp, n, n_x,
):
    """One augmentation phase. Returns 1 if the matching grew, 0 otherwise."""
    for x in range(1, n_x[0] + 1):
        S[x] = -1
        slack[x] = 0
    qhead = 0
    qtail[0] = 0
    for x in range(1, n_x[0] + 1):
        if st[x] == x and match[x] == 0:
            pa[x] = 0
            S[x] = 0
            _q_push(queue, qtail, flower, flower_len, n, x)
    if qtail[0] == 0:
        return 0
    while True:
        while qhead < qtail[0]:
            u = queue[qhead]
            qhead += 1
            if S[st[u]] == 1:
                continue
            for v in range(1, n + 1):
                if gw[u, v] > 0 and st[u] != st[v]:
                    if _delta(lab, gw, u, v) == 0:
                        if _on_found_edge(
                            gw, gu, gv, lab, match, st, pa, S, slack, flower,
                            flower_len, flower_from, queue, qtail, vis, tstamp,
                            n, n_x, u, v,
                        ):
                            return 1
                    else:
                        _update_slack(lab, gw, gu, gv, slack, u, st[v])
        d = INF
        for b in range(n + 1, n_x[0] + 1):
            if st[b] == b and S[b] == 1:
                dd = lab[b] // 2
                if dd < d:
                    d = dd
        for x in range(1, n_x[0] + 1):
            if st[x] == x and slack[x] != 0:
                dd = _delta(lab, gw, gu[slack[x], x], gv[slack[x], x])
                if S[x] == 0:
                    dd //= 2
                elif S[x] != -1:
                    continue
                if dd < d:
                    d = dd
        for u in range(1, n + 1):
            if S[st[u]] == 0:
                if lab[u] <= d:
                    return 0  # duals exhausted: no augmenting path exists
                lab[u] -= d
            elif S[st[u]] == 1:
                lab[u] += d
        for b in range(n + 1, n_x[0] + 1):
            if st[b] == b:
                if S[b] == 0:
                    lab[b] += 2 * d
                elif S[b] == 1:
                    lab[b] -= 2 * d
        qhead = 0
        qtail[0] = 0
        for x in range(1, n_x[0] + 1):
            if (
                st[x] == x
                and slack[x] != 0
                and st[slack[x]] != x
                and _delta(lab, gw, gu[slack[x], x], gv[slack[x], x]) == 0
            ):
                if _on_found_edge(
                    gw, gu, gv, lab, match, st, pa, S, slack, flower, flower_len,
                    flower_from, queue, qtail, vis, tstamp, n, n_x,
                    gu[slack[x], x], gv[slack[x], x],
                ):
                    return 1
        for b in range(n + 1, n_x[0] + 1):
            if st[b] == b and S[b] == 1 and lab[b] == 0:
                _expand_blossom(
                    gw, gu, gv, lab, match, st, pa, S, slack, flower, flower_len,
                    flower_from, queue, qtail, n, b,
                )
    return 0


@njit(cache=True)
def _solve_max_weight(w):
    """Maximum-weight matching of a dense symmetric int64 matrix (1-based
    inside). Entries <= 0 mean 'no edge'. Returns (match, n_matches)."""
    n = w.shape[0]
    cap = 2 * n + 2
    gw = np.zeros((cap, cap), np.int64)
    gu = np.zeros((cap, cap), np.int64)
    gv = np.zeros((cap, cap), np.int64)
    lab = np.zeros(cap, np.int64)
    match = np.zeros(cap, np.int64)
    st = np.zeros(cap, np.int64)
    pa = np.zeros(cap, np.int64)
    S = np.full(cap, -1, np.int64)
    slack = np.zeros(cap, np.int64)
    flower = np.zeros((cap, n + 2), np.int64)
    flower_len = np.zeros(cap, np.int64)
    flower_from = np.zeros((cap, n + 1), np.int64)
    queue = np.zeros(4 * cap + 16, np.int64)
    qtail = np.zeros(1, np.int64)
    vis = np.zeros(cap, np.int64)
    tstamp = np.zeros(1, np.int64)
    n_x = np.zeros(1, np.int64)
    n_x[0] = n

    w_max = np.int64(0)
    for i in range(n):
        for j in range(n):
            if i != j and w[i, j] > w_max:
                w_max = w[i, j]
    for x in range(cap):
        st[x] = x
    for u in range(1, n + 1):
        lab[u] = w_max
        flower_from[u, u] = u
        for v in range(1, n + 1):
            gu[u, v] = u
            gv[u, v] = v
            if u != v:
                gw[u, v] = w[u - 1, v - 1]
    lab[0] = INF

    n_matches = 0
    while _matching_phase(
        gw, gu, gv, lab, match, st, pa, S, slack, flower, flower_len,
        flower_from, queue, qtail, vis, tstamp, n, n_x,
    ):
        n_matches += 1
    return match[1 : n + 1], n_matches


def min_weight_perfect_matching(dist: np.ndarray) -> np.ndarray:
    """Exact minimum-weight perfect matching of a dense distance matrix.

    dist must be symmetric, non-negative int64, with an even number of
    nodes. Returns mate[i] (0-based). Deterministic for identical inputs.
    """
    n = dist.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    if n % 2 != 0:
        raise ValueError("perfect matching needs an even number of nodes")
    dist = np.asarray(dist, dtype=np.int64)
    if (dist < 0).any():
        raise ValueError("distances must be non-negative")
    # strictly positive transformed weights make max-weight == perfect
    transformed = dist.max() + 1 - dist
    np.fill_diagonal(transformed, 0)
    match, n_matches = _solve_max_weight(transformed)
    if n_matches != n // 2:
        raise RuntimeError("matching failed to become perfect; invalid input?")
    return match - 1


# ---------------------------------------------------------------------------
# matching-graph decode kernels


@njit(cache=True)
def _dijkstra_paths(indptr, nbr_node, nbr_edge, cost, sources, dist_out, parent_out):
    """Dijkstra from each source over an undirected CSR multigraph with
    int64 edge costs, recording the parent edge of each shortest-path tree."""
    n_nodes = indptr.shape[0] - 1
    cap = nbr_node.shape[0] + n_nodes + 4
    heap_d = np.empty(cap, np.int64)
    heap_v = np.empty(cap, np.int64)
    for s in range(sources.shape[0]):
        dist = dist_out[s]
        par = parent_out[s]
        for i in range(n_nodes):
            dist[i] = INF
            par[i] = -1
        src = sources[s]
        dist[src] = 0
        heap_d[0] = 0
        heap_v[0] = src
        hn = 1
        while hn > 0:
            d0 = heap_d[0]
            v0 = heap_v[0]
            hn -= 1
            heap_d[0] = heap_d[hn]
            heap_v[0] = heap_v[hn]
            i = 0
            while True:
                left = 2 * i + 1
                right = left + 1
                m = i
                if left < hn and heap_d[left] < heap_d[m]:
                    m = left
                if right < hn and heap_d[right] < heap_d[m]:
                    m = right
                if m == i:
                    break
                heap_d[i], heap_d[m] = heap_d[m], heap_d[i]
                heap_v[i], heap_v[m] = heap_v[m], heap_v[i]
                i = m
            if d0 > dist[v0]:
                continue
            for k in range(indptr[v0], indptr[v0 + 1]):
                w = nbr_node[k]
                nd = d0 + cost[nbr_edge[k]]
                if nd < dist[w]:
                    dist[w] = nd
                    par[w] = nbr_edge[k]
                    i = hn
                    heap_d[hn] = nd
                    heap_v[hn] = w
                    hn += 1
                    while i > 0:
                        p = (i - 1) // 2
                        if heap_d[p] <= heap_d[i]:
                            break
                        heap_d[i], heap_d[p] = heap_d[p], heap_d[i]
                        heap_v[i], heap_v[p] = heap_v[p], heap_v[i]
                        i = p


@njit(cache=True)
def general_decode(indptr, nbr_node, nbr_edge, cost, edge_u, edge_v, defects, n_edges):
    """MWPM over the defect set under the shortest-path metric of composite
    edge costs: per-defect Dijkstra, exact blossom on the dense distance
    matrix, then XOR of the matched shortest paths."""
    n_def = defects.shape[0]
    n_nodes = indptr.shape[0] - 1
    correction = np.zeros(n_edges, np.uint8)
    if n_def == 0:
        return correction
    dist = np.empty((n_def, n_nodes), np.int64)
    parent = np.empty((n_def, n_nodes), np.int64)
    _dijkstra_paths(indptr, nbr_node, nbr_edge, cost, defects, dist, parent)
    dmat = np.empty((n_def, n_def), np.int64)
    for i in range(n_def):
        for j in range(n_def):
            dmat[i, j] = dist[i, defects[j]]
    tmax = np.int64(0)
    for i in range(n_def):
        for j in range(n_def):
            if i != j and dmat[i, j] > tmax:
                tmax = dmat[i, j]
    trans = np.empty((n_def, n_def), np.int64)
    for i in range(n_def):
        for j in range(n_def):
            trans[i, j] = tmax + 1 - dmat[i, j] if i != j else 0
    mate, n_matches = _solve_max_weight(trans)
    if n_matches * 2 != n_def:
        raise RuntimeError("defect matching is not perfect")
    for i in range(n_def):
        j = mate[i] - 1
        if j < i:
            continue
        node = defects[j]
        target = defects[i]
        while node != target:
            e = parent[i, node]
            correction[e] ^= np.uint8(1)
            node = edge_v[e] if edge_u[e] == node else edge_u[e]
    return correction


@njit(cache=True)
def cluster_decode(edge_u, edge_v, zero_mask, syndrome, n_nodes):
    """MWPM fast path for two-level {0, W} weights: contract zero-weight
    (erased) clusters, pair odd-parity clusters by contracted hop distance
    with the exact blossom, then fix intra-cluster parity on a spanning
    forest of the zero-weight edges."""
    n_edges = edge_u.shape[0]
    correction = np.zeros(n_edges, np.uint8)

    # adjacency restricted to zero-weight edges, deterministic edge order
    deg = np.zeros(n_nodes + 1, np.int64)
    for e in range(n_edges):
        if zero_mask[e]:
            deg[edge_u[e] + 1] += 1
            deg[edge_v[e] + 1] += 1
    zptr = np.empty(n_nodes + 1, np.int64)
    zptr[0] = 0
    for i in range(n_nodes):
        zptr[i + 1] = zptr[i] + deg[i + 1]
    fill = zptr.copy()
    znbr = np.empty(zptr[n_nodes], np.int64)
    zedge = np.empty(zptr[n_nodes], np.int64)
    for e in range(n_edges):
        if zero_mask[e]:
            u = edge_u[e]
            v = edge_v[e]
            znbr[fill[u]] = v
            zedge[fill[u]] = e
            fill[u] += 1
            znbr[fill[v]] = u
            zedge[fill[v]] = e
            fill[v] += 1

    # BFS labeling of erased clusters; the traversal tree doubles as the
    # spanning forest for the parity pass
    label = np.full(n_nodes, -1, np.int64)
    parent_edge = np.full(n_nodes, -1, np.int64)
    parent_node = np.full(n_nodes, -1, np.int64)
    order = np.empty(n_nodes, np.int64)
    queue = np.empty(n_nodes, np.int64)
    n_ord = 0
    n_clusters = 0
    for v0 in range(n_nodes):
        if label[v0] >= 0:
            continue
        label[v0] = n_clusters
        queue[0] = v0
        qh = 0
        qt = 1
        order[n_ord] = v0
        n_ord += 1
        while qh < qt:
            u = queue[qh]
            qh += 1
            for k in range(zptr[u], zptr[u + 1]):
                w = znbr[k]
                if label[w] < 0:
                    label[w] = n_clusters
                    parent_edge[w] = zedge[k]
                    parent_node[w] = u
                    order[n_ord] = w
                    n_ord += 1
                    queue[qt] = w
                    qt += 1
        n_clusters += 1

    # defect parity per cluster
    cpar = np.zeros(n_clusters, np.uint8)
    for v in range(n_nodes):
        if syndrome[v]:
            cpar[label[v]] ^= np.uint8(1)
    n_odd = 0
    for c in range(n_clusters):
        if cpar[c]:
            n_odd += 1

    term = syndrome.copy()

    if n_odd > 0:
        odd = np.empty(n_odd, np.int64)
        t = 0
        for c in range(n_clusters):
            if cpar[c]:
                odd[t] = c
                t += 1
        # contracted graph over clusters via non-erased edges
        cdeg = np.zeros(n_clusters + 1, np.int64)
        for e in range(n_edges):
            if not zero_mask[e]:
                cu = label[edge_u[e]]
                cv = label[edge_v[e]]
                if cu != cv:
                    cdeg[cu + 1] += 1
                    cdeg[cv + 1] += 1
        cptr = np.empty(n_clusters + 1, np.int64)
        cptr[0] = 0
        for i in range(n_clusters):
            cptr[i + 1] = cptr[i] + cdeg[i + 1]
        cfill = cptr.copy()
        cnbr = np.empty(cptr[n_clusters], np.int64)
        cedge = np.empty(cptr[n_clusters], np.int64)
        for e in range(n_edges):
            if not zero_mask[e]:
                cu = label[edge_u[e]]
                cv = label[edge_v[e]]
                if cu != cv:
                    cnbr[cfill[cu]] = cv
                    cedge[cfill[cu]] = e
                    cfill[cu] += 1
                    cnbr[cfill[cv]] = cu
                    cedge[cfill[cv]] = e
                    cfill[cv] += 1

        # unit-cost BFS from each odd cluster with parent tracking
        cdist = np.empty((n_odd, n_clusters), np.int64)
        cpedge = np.empty((n_odd, n_clusters), np.int64)
        cpclu = np.empty((n_odd, n_clusters), np.int64)
        cqueue = np.empty(n_clusters, np.int64)
        for s in range(n_odd):
            for c in range(n_clusters):
                cdist[s, c] = INF
                cpedge[s, c] = -1
                cpclu[s, c] = -1
            src = odd[s]
            cdist[s, src] = 0
            cqueue[0] = src
            qh = 0
            qt = 1
            while qh < qt:
                cu = cqueue[qh]
                qh += 1
                for k in range(cptr[cu], cptr[cu + 1]):
                    cw = cnbr[k]
                    if cdist[s, cw] == INF:
                        cdist[s, cw] = cdist[s, cu] + 1
                        cpedge[s, cw] = cedge[k]
                        cpclu[s, cw] = cu
                        cqueue[qt] = cw
                        qt += 1

        dmat = np.empty((n_odd, n_odd), np.int64)
        for i in range(n_odd):
            for j in range(n_odd):
                dmat[i, j] = cdist[i, odd[j]]
        tmax = np.int64(0)
        for i in range(n_odd):
            for j in range(n_odd):
                if i != j and dmat[i, j] > tmax:
                    tmax = dmat[i, j]
        trans = np.empty((n_odd, n_odd), np.int64)
        for i in range(n_odd):
            for j in range(n_odd):
                trans[i, j] = tmax + 1 - dmat[i, j] if i != j else 0
        mate, n_matches = _solve_max_weight(trans)
        if n_matches * 2 != n_odd:
            raise RuntimeError("odd-cluster matching is not perfect")
        for i in range(n_odd):
            j = mate[i] - 1
            if j < i:
                continue
            c = odd[j]
            target = odd[i]
            while c != target:
                e = cpedge[i, c]
                correction[e] ^= np.uint8(1)
                term[edge_u[e]] ^= np.uint8(1)
                term[edge_v[e]] ^= np.uint8(1)
                c = cpclu[i, c]

    # intra-cluster parity on the BFS forest, leaves upward
    for idx in range(n_ord - 1, -1, -1):
        v = order[idx]
        if term[v] and parent_edge[v] >= 0:
            correction[parent_edge[v]] ^= np.uint8(1)
            term[v] ^= np.uint8(1)
            term[parent_node[v]] ^= np.uint8(1)
    for v in range(n_nodes):
        if term[v]:
            raise RuntimeError("cluster parity not resolved; invalid input?")
    return correction
