"""Finite-size-scaling fits against the synthetic ground-truth oracle."""

import numpy as np
import pytest

from erasurelab.fss import (
    FssDataset,
    FssWindowError,
    bootstrap_fss,
    fit_collapse,
    fit_linearized,
    window_sensitivity,
)

from synth import TRUE_NU, TRUE_P_INF, pstar_map, synthetic_dataset


def test_collapse_recovers_noiseless_truth():
    data = synthetic_dataset(noise_shots=None)
    res = fit_collapse(data, pstar_map())
    assert abs(res.p_inf - TRUE_P_INF) < 1e-4
    assert abs(res.nu - TRUE_NU) < 1e-4
    assert res.rss < 1e-12


def test_collapse_recovers_noisy_truth():
    data = synthetic_dataset(noise_shots=200_000, seed=42)
    res = fit_collapse(data, pstar_map())
    assert abs(res.p_inf - TRUE_P_INF) < 0.003
    assert abs(res.nu - TRUE_NU) < 0.05


def test_collapse_quality_vs_binomial_noise():
    data = synthetic_dataset(noise_shots=200_000, seed=3)
    res = fit_collapse(data, pstar_map())
    mask = np.abs(data.p - TRUE_P_INF) < res.window
    n_pts = int(mask.sum())
    noise_var = float(np.mean(data.wer[mask] * (1 - data.wer[mask]) / data.shots[mask]))
    assert res.rss / n_pts < 3 * noise_var


def test_refinement_not_worse_than_grid():
    data = synthetic_dataset(noise_shots=200_000, seed=9)
    grid_only = fit_collapse(data, pstar_map(), refine=False)
    refined = fit_collapse(data, pstar_map(), refine=True)
    assert refined.rss <= grid_only.rss + 1e-15


def test_single_size_refused():
    data = synthetic_dataset(sizes=(576,))
    with pytest.raises(FssWindowError):
        fit_collapse(data, pstar_map())


def test_sparse_size_refused():
    # a size with fewer than 4 in-window points refuses the whole fit
    full = synthetic_dataset()
    keep = (full.n != 1296) | (full.p < TRUE_P_INF - 0.03)
    data = FssDataset(full.n[keep], full.p[keep], full.wer[keep],
                      full.shots[keep], full.failures[keep])
    with pytest.raises(FssWindowError):
        fit_collapse(data, pstar_map())


def test_missing_pstar_refused():
    data = synthetic_dataset()
    centers = pstar_map()
    del centers[1296]
    with pytest.raises(FssWindowError):
        fit_collapse(data, centers)


def test_rescaling_n_leaves_p_inf_invariant():
    # scaling all n by a common factor is absorbed by the polynomial
    data = synthetic_dataset(noise_shots=None)
    doubled = FssDataset(data.n * 2, data.p, data.wer, data.shots, data.failures)
    res_a = fit_collapse(data, pstar_map())
    res_b = fit_collapse(doubled, {int(n) * 2: TRUE_P_INF for n in pstar_map()})
    assert abs(res_a.p_inf - res_b.p_inf) < 1e-3
    assert abs(res_a.nu - res_b.nu) < 0.02


def test_bootstrap_deterministic_and_tight_at_huge_shots():
    data = synthetic_dataset(noise_shots=None, shots=100_000_000)
    base = fit_collapse(data, pstar_map())
    a = bootstrap_fss(data, pstar_map(), base, iterations=60, bootstrap_seed=5)
    b = bootstrap_fss(data, pstar_map(), base, iterations=60, bootstrap_seed=5)
    assert a == b
    ci_p, ci_nu, skipped, flagged = a
    assert ci_p[1] - ci_p[0] < 1e-3
    assert skipped == 0 and not flagged


def test_bootstrap_covers_truth_on_noisy_data():
    data = synthetic_dataset(noise_shots=200_000, seed=21)
    base = fit_collapse(data, pstar_map())
    ci_p, ci_nu, _, _ = bootstrap_fss(data, pstar_map(), base, iterations=120,
                                      bootstrap_seed=17)
    # generous slack: the CI is statistical, truth should be near it
    assert ci_p[0] - 0.002 <= TRUE_P_INF <= ci_p[1] + 0.002
    assert ci_nu[0] - 0.05 <= TRUE_NU <= ci_nu[1] + 0.05


def test_window_sensitivity_spread_small_without_corrections():
    data = synthetic_dataset(noise_shots=None)
    results, spread = window_sensitivity(data, pstar_map())
    assert set(results) == {0.04, 0.06, 0.08}
    assert all(r is not None for r in results.values())
    assert spread < 1e-3


def test_window_sensitivity_single_window():
    data = synthetic_dataset()
    results, spread = window_sensitivity(data, pstar_map(), windows=(0.06,))
    assert spread == 0.0


def test_window_sensitivity_infeasible_window_reported_absent():
    data = synthetic_dataset(p_step=0.03)  # 0.04 window keeps < 4 points/size
    results, spread = window_sensitivity(data, pstar_map())
    assert results[0.04] is None
    assert results[0.06] is not None


def test_linearized_exact_power_law():
    nu = 1.18
    pstars = {n: (0.488 + 0.5 * n ** (-1.0 / nu), 0.0) for n in (144, 324, 576, 900, 1296)}
    fit = fit_linearized(pstars, nu)
    assert abs(fit.p_inf - 0.488) < 1e-10 * 0.488
    assert abs(fit.c - 0.5) < 1e-10 * 0.5
    assert fit.ci[0] <= fit.p_inf <= fit.ci[1]


def test_linearized_constant_pstar():
    pstars = {n: (0.45, 0.001) for n in (144, 324, 576)}
    fit = fit_linearized(pstars, 1.18)
    assert abs(fit.p_inf - 0.45) < 1e-12
    assert abs(fit.c) < 1e-12


def test_linearized_needs_three_sizes():
    with pytest.raises(ValueError):
        fit_linearized({144: (0.37, 0.001), 324: (0.44, 0.001)}, 1.18)


def test_linearized_weights_favor_precise_points():
    # same data, but a wildly uncertain outlier barely moves the weighted fit
    nu = 1.18
    pstars_clean = {n: (0.488 + 0.5 * n ** (-1.0 / nu), 1e-4) for n in (144, 324, 576, 900)}
    pstars_noisy = dict(pstars_clean)
    pstars_noisy[1296] = (0.3, 0.5)  # nonsense value, huge uncertainty
    fit = fit_linearized(pstars_noisy, nu)
    assert abs(fit.p_inf - 0.488) < 1e-3
