"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s`. Criterion 9 (full-scale
reproduction, hours to days) is opt-in via ERASURELAB_FULLSCALE=1.

Criterion 3 is known-red: under the either-sector rowspace failure metric,
the uninformed toric baseline saturates at WER = 1 - (1/4)^2 = 0.9375
(uniform over the four homology classes per sector), not at 0.75, which
corresponds to a per-logical-qubit counting convention. The test asserts
the stated tolerance anyway and fails honestly; see the repository notes.
"""

import csv
import json
import os

import numpy as np
import pytest

from erasurelab.bposd import BpOsdConfig, decode_sector
from erasurelab.codes import build_bb_code, build_toric_code, get_code
from erasurelab.cli import main
from erasurelab.erasure import sample_erasure, syndromes
from erasurelab.fss import fit_collapse, fit_linearized
from erasurelab.gf2 import in_rowspace, rank
from erasurelab.matching import (
    build_matching_graph,
    matching_weight,
    mwpm_decode,
    weights_erasure_aware,
    weights_uninformed,
)
from erasurelab.montecarlo import (
    derive_point_seed,
    estimate_wer,
    stable_point_id,
    tagged_seed,
)
from erasurelab.threshold import find_threshold

from reference import brute_force_matching_weight, brute_force_min_error, dijkstra
from synth import TRUE_NU, TRUE_P_INF, pstar_map, synthetic_dataset

BASE_SEED = 12345

BB_TABLE = {
    "bb-12x6": (144, 12),
    "bb-18x9": (324, 8),
    "bb-24x12": (576, 16),
    "bb-30x15": (900, 8),
    "bb-36x18": (1296, 12),
}
TORIC_TABLE = {12: 288, 24: 1152, 30: 1800, 36: 2592}


def report(criterion: str, ok: bool, detail: str):
    print(f"\nACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {criterion}: {detail}"


def _threshold_for(code, decoder, shots, **kwargs):
    def evaluate(p):
        pid = stable_point_id(code.name, decoder, p, shots)
        return estimate_wer(code, decoder, p, shots, derive_point_seed(BASE_SEED, pid))

    return find_threshold(
        evaluate, bootstrap_seed=tagged_seed(BASE_SEED, "pstar-boot", code.name), **kwargs
    )


def test_criterion_1_code_construction():
    problems = []
    for name, (n, k) in BB_TABLE.items():
        code = get_code(name)
        if (code.n, code.k) != (n, k):
            problems.append(f"{name}: got ({code.n}, {code.k}), want ({n}, {k})")
        prod = (code.hx.to_dense() @ code.hz.to_dense().T) % 2
        if prod.any():
            problems.append(f"{name}: hx·hz^T != 0")
    for l, n in TORIC_TABLE.items():
        code = build_toric_code(l)
        if (code.n, code.k) != (n, 2):
            problems.append(f"toric-{l}: got ({code.n}, {code.k}), want ({n}, 2)")
    report(
        "1 code construction",
        not problems,
        "; ".join(problems) or "five BB codes match Table 1, toric K=2 at all four sizes",
    )


def test_criterion_2_gross_pseudo_threshold():
    code = build_bb_code(12, 6)
    res = _threshold_for(code, "bposd", 20_000)
    ok = 0.362 <= res.p_star <= 0.378
    report(
        "2 gross-code threshold",
        ok,
        f"p* = {res.p_star:.4f} [{res.ci_lo:.4f}, {res.ci_hi:.4f}] "
        f"(required in [0.362, 0.378]; paper 0.3701; {len(res.evaluations)} evaluations)",
    )


def test_criterion_3_uninformed_baseline_random_guessing():
    code = build_toric_code(12)
    wers = {}
    for p in (0.30, 0.45, 0.60):
        pid = stable_point_id(code.name, "mwpm-uninformed", p, 5_000)
        point = estimate_wer(
            code, "mwpm-uninformed", p, 5_000, derive_point_seed(BASE_SEED, pid)
        )
        wers[p] = point.wer
    values = list(wers.values())
    within = all(abs(w - 0.75) <= 0.02 for w in values)
    flat = max(values) - min(values) <= 0.03
    report(
        "3 uninformed baseline",
        within and flat,
        f"WER = {wers} (required each in 0.75±0.02 and pairwise within 0.03; "
        "known-red: the either-sector rowspace metric saturates at 0.9375, "
        "see decisions ledger)",
    )


def test_criterion_4_erasure_aware_baseline():
    code = build_toric_code(24)
    res = _threshold_for(code, "mwpm-erasure", 10_000)
    ok = 0.436 <= res.p_star <= 0.456
    report(
        "4 erasure-aware baseline",
        ok,
        f"toric-24 p* = {res.p_star:.4f} [{res.ci_lo:.4f}, {res.ci_hi:.4f}] "
        f"(required in [0.436, 0.456]; paper 0.446)",
    )


def test_criterion_5_fss_oracle_recovery():
    noisy = synthetic_dataset(noise_shots=200_000, seed=42)
    res_noisy = fit_collapse(noisy, pstar_map())
    noiseless = synthetic_dataset(noise_shots=None)
    res_exact = fit_collapse(noiseless, pstar_map())
    ok_noisy = (
        abs(res_noisy.p_inf - TRUE_P_INF) <= 0.003 and abs(res_noisy.nu - TRUE_NU) <= 0.05
    )
    ok_exact = (
        abs(res_exact.p_inf - TRUE_P_INF) <= 1e-4 and abs(res_exact.nu - TRUE_NU) <= 1e-4
    )
    report(
        "5 fss oracle recovery",
        ok_noisy and ok_exact,
        f"noisy: p_inf {res_noisy.p_inf:.4f} (±0.003), nu {res_noisy.nu:.3f} (±0.05); "
        f"noiseless: p_inf err {abs(res_exact.p_inf - TRUE_P_INF):.2e}, "
        f"nu err {abs(res_exact.nu - TRUE_NU):.2e} (±1e-4)",
    )


def test_criterion_6_linearized_exactness():
    nu = 1.18
    pstars = {
        n: (0.488 + 0.5 * n ** (-1.0 / nu), 0.0) for n in (144, 324, 576, 900, 1296)
    }
    fit = fit_linearized(pstars, nu)
    err_i = abs(fit.p_inf - 0.488) / 0.488
    err_c = abs(fit.c - 0.5) / 0.5
    ok = err_i < 1e-10 and err_c < 1e-10
    report(
        "6 linearized exactness",
        ok,
        f"intercept rel err {err_i:.2e}, slope rel err {err_c:.2e} (required < 1e-10)",
    )


def test_criterion_7a_bposd_matches_brute_force():
    code = build_bb_code(12, 6)
    cfg = BpOsdConfig()
    rng = np.random.default_rng(tagged_seed(BASE_SEED, "acceptance-oracle") % 2**32)
    agree = 0
    trials = 1000
    for _ in range(trials):
        k = int(rng.integers(1, 4))
        idx = rng.choice(code.n, size=k, replace=False)
        erased = np.zeros(code.n, dtype=np.uint8)
        erased[idx] = 1
        sector_ok = True
        for h, h_other, coin in ((code.hz, code.hx, 0.5), (code.hx, code.hz, 0.5)):
            err = np.zeros(code.n, dtype=np.uint8)
            err[idx] = rng.random(k) < coin
            syn = h.matvec(err)
            corr = decode_sector(h, syn, erased, cfg)
            oracle = brute_force_min_error(h.to_dense(), syn, erased)
            if oracle is None or not in_rowspace(h_other, corr ^ oracle):
                sector_ok = False
        agree += int(sector_ok)
    ok = agree >= 0.99 * trials
    report(
        "7a decoder oracle equivalence (BP-OSD)",
        ok,
        f"{agree}/{trials} trials stabilizer-equivalent to the brute-force "
        "minimum over the erased support (required >= 990)",
    )


def test_criterion_7b_mwpm_matches_brute_force():
    code = build_toric_code(4)
    g = weights_uninformed(build_matching_graph(code, "X"), 0.3)
    rng = np.random.default_rng(tagged_seed(BASE_SEED, "acceptance-mwpm") % 2**32)
    edges = [tuple(e) for e in g.edges]
    matches = 0
    trials = 500
    for _ in range(trials):
        n_def = 2 * int(rng.integers(1, 5))
        syndrome = np.zeros(g.n_nodes, dtype=np.uint8)
        syndrome[rng.choice(g.n_nodes, size=n_def, replace=False)] = 1
        corr = mwpm_decode(g, syndrome)
        defects = list(np.flatnonzero(syndrome))
        dmat = np.array(
            [
                [dijkstra(g.n_nodes, edges, g.weights.astype(float), a)[b] for b in defects]
                for a in defects
            ]
        )
        optimum = int(brute_force_matching_weight(dmat))
        matches += int(matching_weight(g, corr) == optimum)
    ok = matches == trials
    report(
        "7b decoder oracle equivalence (MWPM)",
        ok,
        f"{matches}/{trials} L=4 matchings equal the brute-force optimum (required all)",
    )


def test_criterion_8_determinism(tmp_path):
    argv = [
        "sweep", "--codes", "bb-12x6", "--p-list", "0.32,0.36", "--shots", "1500",
        "--seed", str(BASE_SEED),
    ]
    main(argv + ["--threads", "1", "--out", str(tmp_path / "t1")])
    main(argv + ["--threads", "8", "--out", str(tmp_path / "t8")])
    csv_equal = (tmp_path / "t1" / "sweep.csv").read_bytes() == (
        tmp_path / "t8" / "sweep.csv"
    ).read_bytes()

    thr_argv = [
        "threshold", "--codes", "toric-4", "--decoder", "mwpm-erasure",
        "--shots", "400", "--max-evals", "6", "--bootstrap-iters", "500",
        "--seed", str(BASE_SEED),
    ]
    main(thr_argv + ["--out", str(tmp_path / "r1")])
    main(thr_argv + ["--out", str(tmp_path / "r2")])
    json_equal = (tmp_path / "r1" / "threshold.json").read_text() == (
        tmp_path / "r2" / "threshold.json"
    ).read_text()
    report(
        "8 determinism",
        csv_equal and json_equal,
        f"1-vs-8-thread CSV bodies byte-identical: {csv_equal}; "
        f"bootstrap CIs identical across reruns: {json_equal}",
    )


FULLSCALE = os.environ.get("ERASURELAB_FULLSCALE") == "1"


@pytest.mark.skipif(
    not FULLSCALE,
    reason="full-scale reproduction (hours-days); set ERASURELAB_FULLSCALE=1 to run",
)
def test_criterion_9_full_scale_reproduction(tmp_path):
    # Table 1 p* at 200k shots for all five BB sizes, then the FSS report.
    table1 = {
        "bb-12x6": 0.3701,
        "bb-18x9": 0.4386,
        "bb-24x12": 0.4453,
        "bb-30x15": 0.4674,
        "bb-36x18": 0.4706,
    }
    problems = []
    pstars = {}
    for name, expected in table1.items():
        code = get_code(name)
        res = _threshold_for(code, "bposd", 200_000)
        pstars[name] = res
        if abs(res.p_star - expected) > 0.002:
            problems.append(f"{name}: p* {res.p_star:.4f} vs {expected:.4f}")

    out = tmp_path / "fullscale"
    rc = main([
        "sweep", "--p-start", "0.30", "--p-stop", "0.55", "--p-step", "0.01",
        "--shots", "200000", "--seed", str(BASE_SEED), "--out", str(out),
    ])
    assert rc == 0
    rows, n_by_code = [], {}
    with open(out / "sweep.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            rows.append((int(row["n"]), float(row["p"]), float(row["wer"]),
                         int(row["shots"]), int(row["failures"])))
            n_by_code[row["code"]] = int(row["n"])
    from erasurelab.fss import FssDataset, window_sensitivity

    data = FssDataset.from_rows(rows)
    centers = {n_by_code[name]: res.p_star for name, res in pstars.items()}
    fit = fit_collapse(data, centers)
    if abs(fit.p_inf - 0.488) > 0.003:
        problems.append(f"p_inf {fit.p_inf:.4f} vs 0.488±0.003")
    if abs(fit.nu - 1.18) > 0.06:
        problems.append(f"nu {fit.nu:.3f} vs 1.18±0.06")
    _, spread = window_sensitivity(data, centers)
    if spread > 0.005:
        problems.append(f"window spread {spread:.4f} > 0.005")
    report("9 full-scale reproduction", not problems, "; ".join(problems) or
           f"Table 1 within ±0.002, p_inf {fit.p_inf:.4f}, nu {fit.nu:.3f}, spread {spread:.4f}")
