"""Numba kernels for packed GF(2) arithmetic and BP/OSD inner loops.

Everything here operates on raw arrays (uint64 packed words, CSR index
arrays, float64 LLRs) so it can be JIT-compiled. The public modules wrap
these kernels behind typed APIs; nothing in this file is part of the
package interface.
"""

from __future__ import annotations

import numpy as np
from numba import njit

U1 = np.uint64(1)
U0 = np.uint64(0)


@njit(cache=True, inline="always")
def _parity64(x):
    x ^= x >> np.uint64(32)
    x ^= x >> np.uint64(16)
    x ^= x >> np.uint64(8)
    x ^= x >> np.uint64(4)
    x ^= x >> np.uint64(2)
    x ^= x >> np.uint64(1)
    return np.uint64(x) & U1


@njit(cache=True)
def rref_packed(words, col_order):
    """In-place reduced row echelon form of a packed bit matrix.

    Pivot columns are searched in the order given by `col_order`; among
    candidate rows the lowest row index wins, and the pivot row is swapped
    into position (pivot i ends up in row i). Elimination clears the pivot
    column in every other row across the full word width, so bits beyond
    the columns listed in col_order act as an augmented block that is
    carried along but never searched for pivots.

    Returns the pivot columns in visit order (length = rank).
    """
    nrows, nwords = words.shape
    maxpiv = nrows if nrows < col_order.shape[0] else col_order.shape[0]
    pivots = np.empty(maxpiv, np.int64)
    r = 0
    for t in range(col_order.shape[0]):
        if r == nrows:
            break
        c = col_order[t]
        w = c >> 6
        mask = U1 << np.uint64(c & 63)
        pr = -1
        for i in range(r, nrows):
            if words[i, w] & mask:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(nwords):
                tmp = words[r, j]
                words[r, j] = words[pr, j]
                words[pr, j] = tmp
        for i in range(nrows):
            if i != r and (words[i, w] & mask):
                for j in range(nwords):
                    words[i, j] ^= words[r, j]
        pivots[r] = c
        r += 1
    return pivots[:r]


@njit(cache=True)
def matvec_packed(words, v_words, out):
    """out[i] = parity(row_i AND v) for packed rows and packed vector."""
    nrows, nwords = words.shape
    for i in range(nrows):
        acc = U0
        for j in range(nwords):
            acc ^= words[i, j] & v_words[j]
        out[i] = _parity64(acc)


@njit(cache=True)
def reduce_by_pivots(rref_words, pivots, v_words):
    """Reduce packed vector v against a full RREF; v lies in the rowspace
    iff it reduces to zero. Returns True in that case."""
    for i in range(pivots.shape[0]):
        c = pivots[i]
        if (v_words[c >> 6] >> np.uint64(c & 63)) & U1:
            for j in range(v_words.shape[0]):
                v_words[j] ^= rref_words[i, j]
    for j in range(v_words.shape[0]):
        if v_words[j]:
            return False
    return True


@njit(cache=True)
def get_bit_column(words, rows, col, out):
    """out[i] = bit `col` of row i, for i in range(rows)."""
    w = col >> 6
    sh = np.uint64(col & 63)
    for i in range(rows):
        out[i] = np.uint8((words[i, w] >> sh) & U1)


@njit(cache=True)
def bp_min_sum(
    chk_ptr,
    chk_var,
    var_ptr,
    var_edge,
    edge_chk,
    syndrome,
    priors,
    max_iterations,
    scale,
    clip,
):
    """Flooding-schedule min-sum belief propagation with syndrome signs.

    chk_ptr/chk_var: CSR of the Tanner graph grouped by check (edge id =
    position in chk_var). var_ptr/var_edge: the same edges grouped by
    variable. edge_chk[e] is the check owning edge e.

    Returns (hard, posterior, converged, iterations_used).
    """
    n_chk = chk_ptr.shape[0] - 1
    n_var = var_ptr.shape[0] - 1
    n_edge = chk_var.shape[0]

    c2v = np.zeros(n_edge, np.float64)
    v2c = np.zeros(n_edge, np.float64)
    posterior = priors.copy()
    hard = np.zeros(n_var, np.uint8)

    converged = False
    iters = 0
    for it in range(max_iterations):
        iters = it + 1
        # variable -> check: posterior minus the incoming edge, clipped
        for v in range(n_var):
            s = priors[v]
            for k in range(var_ptr[v], var_ptr[v + 1]):
                s += c2v[var_edge[k]]
            for k in range(var_ptr[v], var_ptr[v + 1]):
                e = var_edge[k]
                m = s - c2v[e]
                if m > clip:
                    m = clip
                elif m < -clip:
                    m = -clip
                v2c[e] = m
        # check -> variable: two-minimum min-sum with syndrome sign
        for c in range(n_chk):
            lo = chk_ptr[c]
            hi = chk_ptr[c + 1]
            sgn = -1.0 if syndrome[c] else 1.0
            min1 = np.inf
            min2 = np.inf
            argmin = -1
            for k in range(lo, hi):
                m = v2c[k]
                if m < 0.0:
                    sgn = -sgn
                    m = -m
                if m < min1:
                    min2 = min1
                    min1 = m
                    argmin = k
                elif m < min2:
                    min2 = m
            for k in range(lo, hi):
                m = v2c[k]
                s = sgn
                if m < 0.0:
                    s = -s
                    m = -m
                mag = min2 if k == argmin else min1
                c2v[k] = scale * s * mag
        # posterior and hard decision
        for v in range(n_var):
            s = priors[v]
            for k in range(var_ptr[v], var_ptr[v + 1]):
                s += c2v[var_edge[k]]
            if s > clip:
                s = clip
            elif s < -clip:
                s = -clip
            posterior[v] = s
            hard[v] = np.uint8(1) if s < 0.0 else np.uint8(0)
        # early stop on syndrome match
        ok = True
        for c in range(n_chk):
            par = np.uint8(0)
            for k in range(chk_ptr[c], chk_ptr[c + 1]):
                par ^= hard[chk_var[k]]
            if par != syndrome[c]:
                ok = False
                break
        if ok:
            converged = True
            break
    return hard, posterior, converged, iters


@njit(cache=True)
def osd_score_candidates(
    base_pivot,
    col_bits,
    flips_a,
    flips_b,
    flip_cost,
    flip_weight,
    pivot_cost,
    base_cost,
    base_weight,
):
    """Score OSD combination-sweep candidates.

    Candidate i toggles sweep positions flips_a[i] and flips_b[i] (-1 means
    "none") relative to the OSD-0 assignment. base_pivot holds the OSD-0
    pivot bits; col_bits[:, a] is the pivot-bit delta caused by toggling
    sweep position a. flip_cost/flip_weight are the non-pivot cost and
    Hamming deltas per sweep position; pivot_cost is the soft cost of each
    pivot column. Returns (costs, weights) per candidate.
    """
    n_cand = flips_a.shape[0]
    rank = base_pivot.shape[0]
    costs = np.empty(n_cand, np.float64)
    weights = np.empty(n_cand, np.int64)
    piv = np.empty(rank, np.uint8)
    for i in range(n_cand):
        a = flips_a[i]
        b = flips_b[i]
        qc = base_cost
        qw = base_weight
        for r in range(rank):
            piv[r] = base_pivot[r]
        if a >= 0:
            for r in range(rank):
                piv[r] ^= col_bits[r, a]
            qc += flip_cost[a]
            qw += flip_weight[a]
        if b >= 0:
            for r in range(rank):
                piv[r] ^= col_bits[r, b]
            qc += flip_cost[b]
            qw += flip_weight[b]
        pc = 0.0
        wc = 0
        for r in range(rank):
            if piv[r]:
                pc += pivot_cost[r]
                wc += 1
        costs[i] = qc + pc
        weights[i] = qw + wc
    return costs, weights
