"""BP-OSD decoder against exhaustive and brute-force oracles."""

import math

import numpy as np
import pytest

from erasurelab.bposd import (
    BpOsdConfig,
    SoftDecision,
    _osd_reduction,
    _sweep_pairs,
    bp_min_sum,
    decode_sector,
    osd_cs,
    priors_from_erasure,
)
from erasurelab.codes import build_bb_code
from erasurelab.erasure import sample_erasure, syndromes
from erasurelab.gf2 import BinaryMatrix, in_rowspace

from reference import brute_force_min_error, exhaustive_syndrome_patterns


CFG = BpOsdConfig()


def test_config_validation():
    with pytest.raises(ValueError):
        BpOsdConfig(unerased_prior=0.6)
    with pytest.raises(ValueError):
        BpOsdConfig(max_iterations=0)
    with pytest.raises(ValueError):
        BpOsdConfig(min_sum_scale=0.0)
    with pytest.raises(ValueError):
        BpOsdConfig(osd_order=-1)


def test_priors_values():
    erased = np.array([1, 0, 1], dtype=np.uint8)
    llr = priors_from_erasure(erased, CFG)
    assert llr[0] == 0.0 and llr[2] == 0.0
    # closed form: ln((1 - 1e-10)/1e-10) ~ 23.0259
    assert math.isclose(llr[1], math.log((1 - 1e-10) / 1e-10), rel_tol=1e-12)
    assert abs(llr[1] - 23.0259) < 1e-3

    all_erased = np.ones(7, dtype=np.uint8)
    assert not priors_from_erasure(all_erased, CFG).any()


def test_priors_clipping():
    cfg = BpOsdConfig(unerased_prior=1e-30, llr_clip=50.0)
    llr = priors_from_erasure(np.zeros(3, dtype=np.uint8), cfg)
    assert (llr == 50.0).all()


def test_bp_zero_syndrome_converges_immediately():
    h = BinaryMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    priors = np.full(3, 5.0)
    soft = bp_min_sum(h, np.zeros(2, dtype=np.uint8), priors, CFG)
    assert soft.converged
    assert soft.iterations_used == 1
    assert not soft.hard.any()


def test_bp_repetition_code_oracle():
    # H = [[1,1,0],[0,1,1]], syndrome [1,0]: exhaustive 8-pattern search
    # says the minimum-weight match is [1,0,0]
    h_dense = np.array([[1, 1, 0], [0, 1, 1]], dtype=np.uint8)
    syndrome = np.array([1, 0], dtype=np.uint8)
    patterns = exhaustive_syndrome_patterns(h_dense, syndrome)
    best = min(patterns, key=lambda e: e.sum())
    assert np.array_equal(best, [1, 0, 0])

    h = BinaryMatrix.from_dense(h_dense)
    soft = bp_min_sum(h, syndrome, np.full(3, 2.0), CFG)
    assert np.array_equal(soft.hard, best)


def test_bp_single_erased_qubit():
    # one erased qubit carrying an X error: the true error is the unique
    # minimum-weight syndrome match within the erased support, and BP finds it
    code = build_bb_code(12, 6)
    rng = np.random.default_rng(31)
    found = 0
    for _ in range(20):
        j = int(rng.integers(code.n))
        erased = np.zeros(code.n, dtype=np.uint8)
        erased[j] = 1
        e_x = erased.copy()
        syn = code.hz.matvec(e_x)
        priors = priors_from_erasure(erased, CFG)
        soft = bp_min_sum(code.hz, syn, priors, CFG)
        if soft.converged and np.array_equal(soft.hard, e_x):
            found += 1
    assert found == 20


def test_bp_hard_matches_posterior_sign():
    code = build_bb_code(12, 6)
    rng = np.random.default_rng(37)
    s = sample_erasure(code.n, 0.3, rng)
    syn_x, _ = syndromes(code, s)
    priors = priors_from_erasure(s.erased, CFG)
    soft = bp_min_sum(code.hz, syn_x, priors, CFG)
    assert np.array_equal(soft.hard, (soft.posterior_llr < 0).astype(np.uint8))


def test_osd_zero_syndrome_returns_zero():
    code = build_bb_code(12, 6)
    erased = np.zeros(code.n, dtype=np.uint8)
    erased[[3, 40, 77]] = 1
    corr = decode_sector(code.hz, np.zeros(code.hz.rows, dtype=np.uint8), erased, CFG)
    assert not corr.any()


def test_osd_candidate_count_and_syndrome():
    # all sweep candidates satisfy the syndrome, and there are
    # 1 + lam + lam(lam-1)/2 of them
    code = build_bb_code(12, 6)
    rng = np.random.default_rng(41)
    s = sample_erasure(code.n, 0.35, rng)
    syn, _ = syndromes(code, s)
    priors = priors_from_erasure(s.erased, CFG)
    soft = bp_min_sum(code.hz, syn, priors, CFG)

    from erasurelab.bposd import _materialize
    from erasurelab import _kernels

    _, pivots, q_cols, _sred, aug, e_q, v0 = _osd_reduction(code.hz, syn, soft)
    lam = min(CFG.osd_order, len(q_cols))
    flips_a, flips_b = _sweep_pairs(lam)
    assert len(flips_a) == 1 + lam + lam * (lam - 1) // 2

    sweep_cols = q_cols[:lam]
    col_bits = np.empty((len(pivots), lam), dtype=np.uint8)
    col = np.empty(len(pivots), dtype=np.uint8)
    for j, c in enumerate(sweep_cols):
        _kernels.get_bit_column(aug, len(pivots), int(c), col)
        col_bits[:, j] = col
    pivots_arr = np.asarray(pivots, dtype=np.int64)
    for a, b in zip(flips_a, flips_b):
        e = _materialize(pivots_arr, e_q, v0, sweep_cols, col_bits, a, b)
        assert np.array_equal(code.hz.matvec(e), syn)


def test_osd_cost_not_worse_than_converged_bp():
    code = build_bb_code(12, 6)
    rng = np.random.default_rng(43)
    checked = 0
    for _ in range(30):
        s = sample_erasure(code.n, 0.2, rng)
        syn, _ = syndromes(code, s)
        priors = priors_from_erasure(s.erased, CFG)
        soft = bp_min_sum(code.hz, syn, priors, CFG)
        if not soft.converged:
            continue
        corr = osd_cs(code.hz, syn, soft, priors, CFG)
        cost = np.where(soft.posterior_llr >= 0, np.abs(priors), -np.abs(priors))
        assert corr @ cost <= soft.hard @ cost + 1e-9
        checked += 1
    assert checked > 10


def test_decode_sector_syndrome_consistency():
    code = build_bb_code(12, 6)
    rng = np.random.default_rng(47)
    for p in (0.1, 0.3, 0.45):
        for _ in range(10):
            s = sample_erasure(code.n, p, rng)
            syn_x, syn_z = syndromes(code, s)
            cx = decode_sector(code.hz, syn_x, s.erased, CFG)
            cz = decode_sector(code.hx, syn_z, s.erased, CFG)
            assert np.array_equal(code.hz.matvec(cx), syn_x)
            assert np.array_equal(code.hx.matvec(cz), syn_z)


def test_decode_sector_single_erasure_no_failure():
    code = build_bb_code(12, 6)
    rng = np.random.default_rng(53)
    for _ in range(25):
        j = int(rng.integers(code.n))
        erased = np.zeros(code.n, dtype=np.uint8)
        erased[j] = 1
        e_x = erased.copy()
        syn = code.hz.matvec(e_x)
        corr = decode_sector(code.hz, syn, erased, CFG)
        assert in_rowspace(code.hx, e_x ^ corr)


def test_decode_sector_matches_brute_force_small_support():
    # with <= 3 erased qubits the brute-force minimum over the erased
    # support is the benchmark; corrections must be stabilizer-equivalent
    code = build_bb_code(12, 6)
    rng = np.random.default_rng(59)
    agree = 0
    trials = 60
    for _ in range(trials):
        k = int(rng.integers(1, 4))
        idx = rng.choice(code.n, size=k, replace=False)
        erased = np.zeros(code.n, dtype=np.uint8)
        erased[idx] = 1
        e_x = np.zeros(code.n, dtype=np.uint8)
        e_x[idx] = rng.random(k) < 0.5
        syn = code.hz.matvec(e_x)
        corr = decode_sector(code.hz, syn, erased, CFG)
        oracle = brute_force_min_error(code.hz.to_dense(), syn, erased)
        assert oracle is not None
        if in_rowspace(code.hx, corr ^ oracle):
            agree += 1
    assert agree >= trials - 1


def test_decoder_is_deterministic():
    code = build_bb_code(12, 6)
    s = sample_erasure(code.n, 0.37, np.random.default_rng(61))
    syn, _ = syndromes(code, s)
    a = decode_sector(code.hz, syn, s.erased, CFG)
    b = decode_sector(code.hz, syn, s.erased, CFG)
    assert np.array_equal(a, b)


def test_exhaustive_small_instance_optimality():
    # on an enumerable instance the decoder's soft cost is >= the true
    # optimum, with equality when the optimum is in the candidate set
    rng = np.random.default_rng(67)
    h_dense = (rng.random((6, 12)) < 0.35).astype(np.uint8)
    h = BinaryMatrix.from_dense(h_dense)
    for _ in range(20):
        e_true = (rng.random(12) < 0.25).astype(np.uint8)
        erased = (e_true | (rng.random(12) < 0.3)).astype(np.uint8)
        syn = h.matvec(e_true)
        priors = priors_from_erasure(erased, CFG)
        soft = bp_min_sum(h, syn, priors, CFG)
        corr = osd_cs(h, syn, soft, priors, CFG)
        assert np.array_equal(h.matvec(corr), syn)

        cost_vec = np.where(soft.posterior_llr >= 0, np.abs(priors), -np.abs(priors))
        best = min(
            float(e @ cost_vec) for e in exhaustive_syndrome_patterns(h_dense, syn)
        )
        assert float(corr @ cost_vec) >= best - 1e-9
