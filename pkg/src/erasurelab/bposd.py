"""Erasure-informed BP-OSD decoding of one CSS sector.

The pipeline is: erasure mask -> per-bit LLR priors -> flooding min-sum
belief propagation with syndrome-adjusted check signs -> ordered-statistics
post-processing with a combination sweep (OSD-CS). OSD always runs, even
when BP converges: the converged hard decision is exactly the OSD-0
candidate, so re-ranking can only lower the soft cost.

The OSD-CS convention implemented here, stated precisely so results are
reproducible: columns are ordered by ascending |posterior LLR| with
hard-decision-1 bits first among ties (then column index); the matrix is
eliminated in that order giving pivots P and non-pivots Q; the OSD-0
candidate fixes Q to the BP hard decisions and solves P through the
elimination; the sweep additionally flips every single bit and every pair
among the osd_order least-reliable positions of Q. The winner minimizes
the soft cost sum_j e[j] * sign(posterior_j) * |prior_j|, with ties broken
by Hamming weight and then lexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .gf2 import BinaryMatrix, _n_words, pack_vector


@dataclass
class BpOsdConfig:
    """Decoder knobs; defaults follow the erasure-channel setup: erased
    qubits get channel probability 0.5, non-erased 1e-10, min-sum BP for at
    most 50 iterations, OSD combination sweep of order 10."""

    max_iterations: int = 50
    osd_order: int = 10
    erased_prior: float = 0.5
    unerased_prior: float = 1e-10
    min_sum_scale: float = 1.0
    llr_clip: float = 50.0

    def __post_init__(self):
        if not (0.0 < self.unerased_prior < self.erased_prior <= 0.5):
            raise ValueError(
                f"need 0 < unerased_prior < erased_prior <= 0.5, got "
                f"{self.unerased_prior}, {self.erased_prior}"
            )
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.osd_order < 0:
            raise ValueError("osd_order must be >= 0")
        if not (0.0 < self.min_sum_scale <= 1.0):
            raise ValueError("min_sum_scale must be in (0, 1]")
        if self.llr_clip <= 0.0:
            raise ValueError("llr_clip must be positive")


@dataclass
class SoftDecision:
    """BP output: hard[j] = 1 iff posterior_llr[j] < 0."""

    hard: np.ndarray
    posterior_llr: np.ndarray
    converged: bool
    iterations_used: int


def priors_from_erasure(erased: np.ndarray, cfg: BpOsdConfig) -> np.ndarray:
    """Per-bit LLR ln((1-q)/q) with q the erased or unerased channel
    probability, clipped to +-llr_clip. Erased bits get exactly 0."""
    erased = np.asarray(erased, dtype=bool)
    q = np.where(erased, cfg.erased_prior, cfg.unerased_prior)
    llr = np.log1p(-q) - np.log(q)
    return np.clip(llr, -cfg.llr_clip, cfg.llr_clip)


def _tanner_arrays(h: BinaryMatrix):
    """CSR views of the Tanner graph, cached on the matrix."""
    cached = h._cache.get("tanner")
    if cached is None:
        dense = h.to_dense()
        chk_idx, var_idx = np.nonzero(dense)  # row-major: grouped by check
        chk_ptr = np.zeros(h.rows + 1, dtype=np.int64)
        np.cumsum(np.bincount(chk_idx, minlength=h.rows), out=chk_ptr[1:])
        chk_var = var_idx.astype(np.int64)
        edge_chk = chk_idx.astype(np.int64)
        var_edge = np.argsort(chk_var, kind="stable").astype(np.int64)
        var_ptr = np.zeros(h.cols + 1, dtype=np.int64)
        np.cumsum(np.bincount(chk_var, minlength=h.cols), out=var_ptr[1:])
        cached = (chk_ptr, chk_var, var_ptr, var_edge, edge_chk)
        h._cache["tanner"] = cached
    return cached


def bp_min_sum(
    h: BinaryMatrix,
    syndrome: np.ndarray,
    priors: np.ndarray,
    cfg: BpOsdConfig,
) -> SoftDecision:
    """Flooding min-sum BP; check c enforces parity syndrome[c]. Stops as
    soon as the running hard decision clears the syndrome."""
    syndrome = np.asarray(syndrome, dtype=np.uint8)
    priors = np.asarray(priors, dtype=np.float64)
    if len(syndrome) != h.rows:
        raise ValueError(f"syndrome length {len(syndrome)} != rows {h.rows}")
    if len(priors) != h.cols:
        raise ValueError(f"priors length {len(priors)} != cols {h.cols}")

    chk_ptr, chk_var, var_ptr, var_edge, edge_chk = _tanner_arrays(h)
    hard, posterior, converged, iters = _kernels.bp_min_sum(
        chk_ptr,
        chk_var,
        var_ptr,
        var_edge,
        edge_chk,
        syndrome,
        priors,
        cfg.max_iterations,
        cfg.min_sum_scale,
        cfg.llr_clip,
    )
    return SoftDecision(hard, posterior, bool(converged), int(iters))


def _soft_costs(priors: np.ndarray, posterior: np.ndarray) -> np.ndarray:
    """Cost of declaring an error on bit j: |prior_j|, signed negative when
    the posterior says the bit is more likely in error. Erased bits (prior
    0) are free either way."""
    return np.where(posterior >= 0.0, np.abs(priors), -np.abs(priors))


def _sweep_pairs(lam: int) -> tuple[np.ndarray, np.ndarray]:
    """Candidate flip lists: none, singles, pairs (a < b)."""
    flips_a = [-1] + list(range(lam))
    flips_b = [-1] * (1 + lam)
    for a in range(lam):
        for b in range(a + 1, lam):
            flips_a.append(a)
            flips_b.append(b)
    return np.array(flips_a, dtype=np.int64), np.array(flips_b, dtype=np.int64)


def _osd_reduction(h: BinaryMatrix, syndrome: np.ndarray, soft: SoftDecision):
    """Reliability-ordered elimination shared by osd_cs and its tests.

    Returns (order, pivots, q_cols, s_red, reduced_words, e_q, v0) where
    e_q is the OSD-0 non-pivot assignment and v0 the resulting pivot bits.
    """
    n = h.cols
    abspost = np.abs(soft.posterior_llr)
    order = np.lexsort((np.arange(n), 1 - soft.hard, abspost)).astype(np.int64)

    nw = _n_words(n)
    aug = np.zeros((h.rows, nw + 1), dtype=np.uint64)
    aug[:, :nw] = h.words
    aug[np.asarray(syndrome, dtype=np.uint8) != 0, nw] = np.uint64(1)
    pivots = _kernels.rref_packed(aug, order)
    rank = len(pivots)
    if np.any(aug[rank:, nw]):
        raise RuntimeError("syndrome not in the rowspace of h; upstream bug")

    is_pivot = np.zeros(n, dtype=bool)
    is_pivot[pivots] = True
    q_cols = order[~is_pivot[order]]

    e_q = np.zeros(n, dtype=np.uint8)
    e_q[q_cols] = soft.hard[q_cols]

    s_red = (aug[:rank, nw] & np.uint64(1)).astype(np.uint8)
    prod = np.empty(h.rows, dtype=np.uint8)
    eq_words = np.zeros(nw + 1, dtype=np.uint64)
    eq_words[:nw] = pack_vector(e_q, n)
    _kernels.matvec_packed(aug, eq_words, prod)
    v0 = s_red ^ prod[:rank]
    return order, pivots, q_cols, s_red, aug, e_q, v0


def _materialize(pivots, e_q, v0, sweep_cols, col_bits, a: int, b: int) -> np.ndarray:
    e = e_q.copy()
    piv = v0.copy()
    if a >= 0:
        e[sweep_cols[a]] ^= 1
        piv ^= col_bits[:, a]
    if b >= 0:
        e[sweep_cols[b]] ^= 1
        piv ^= col_bits[:, b]
    e[pivots] = piv
    return e


def osd_cs(
    h: BinaryMatrix,
    syndrome: np.ndarray,
    soft: SoftDecision,
    priors: np.ndarray,
    cfg: BpOsdConfig,
) -> np.ndarray:
    """Ordered-statistics decoding with a combination sweep; every candidate
    satisfies h·e = syndrome exactly (pivot bits are re-solved per flip)."""
    _, pivots, q_cols, _s_red, aug, e_q, v0 = _osd_reduction(h, syndrome, soft)
    rank = len(pivots)

    lam = min(cfg.osd_order, len(q_cols))
    sweep_cols = q_cols[:lam]
    col_bits = np.empty((rank, lam), dtype=np.uint8)
    col = np.empty(rank, dtype=np.uint8)
    for j, c in enumerate(sweep_cols):
        _kernels.get_bit_column(aug, rank, int(c), col)
        col_bits[:, j] = col

    costs_all = _soft_costs(np.asarray(priors, dtype=np.float64), soft.posterior_llr)
    pivot_cost = costs_all[np.asarray(pivots, dtype=np.int64)] if rank else np.zeros(0)
    base_cost = float(np.dot(e_q.astype(np.float64), costs_all))
    base_weight = int(e_q.sum())
    sign_flip = 1.0 - 2.0 * e_q[sweep_cols].astype(np.float64)
    flip_cost = sign_flip * costs_all[sweep_cols]
    flip_weight = sign_flip.astype(np.int64)

    flips_a, flips_b = _sweep_pairs(lam)
    costs, weights = _kernels.osd_score_candidates(
        v0,
        col_bits,
        flips_a,
        flips_b,
        flip_cost,
        flip_weight,
        np.asarray(pivot_cost, dtype=np.float64),
        base_cost,
        base_weight,
    )

    best = np.flatnonzero(costs == costs.min())
    if len(best) > 1:
        best = best[weights[best] == weights[best].min()]
    if len(best) > 1:
        # lexicographic tie-break on the materialized vectors
        pivots_arr = np.asarray(pivots, dtype=np.int64)
        cands = [
            _materialize(pivots_arr, e_q, v0, sweep_cols, col_bits, flips_a[i], flips_b[i])
            for i in best
        ]
        best = [best[int(np.argmin([c.tobytes() for c in cands]))]]
    i = int(best[0])
    return _materialize(
        np.asarray(pivots, dtype=np.int64), e_q, v0, sweep_cols, col_bits, flips_a[i], flips_b[i]
    )


def decode_sector(
    h: BinaryMatrix,
    syndrome: np.ndarray,
    erased: np.ndarray,
    cfg: BpOsdConfig | None = None,
) -> np.ndarray:
    """Full per-sector pipeline; the returned correction always satisfies
    h·correction = syndrome."""
    if cfg is None:
        cfg = BpOsdConfig()
    priors = priors_from_erasure(erased, cfg)
    soft = bp_min_sum(h, syndrome, priors, cfg)
    return osd_cs(h, syndrome, soft, priors, cfg)
