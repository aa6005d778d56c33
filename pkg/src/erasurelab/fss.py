"""Finite-size scaling: data-collapse fit, bootstrap CIs, window
sensitivity, and the linearized consistency fit.

The collapse model is WER(p, N) ~ f[(p - p_inf) * N^(1/nu)] with f a
degree-3 polynomial. For candidate (p_inf, nu) the polynomial is the exact
linear least-squares fit (normal equations with column scaling), so the
only nonlinearity lives in the 2-parameter outer search: a coarse
deterministic grid followed by Nelder-Mead refinement. The fit window
keeps points with |p - p*(n)| < window, using externally supplied per-size
pseudo-thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.stats import norm


class FssWindowError(ValueError):
    """The windowed dataset is too small for a collapse fit."""


@dataclass
class FssDataset:
    """Per-point WER data across code sizes."""

    n: np.ndarray
    p: np.ndarray
    wer: np.ndarray
    shots: np.ndarray
    failures: np.ndarray

    def __post_init__(self):
        self.n = np.asarray(self.n, dtype=np.int64)
        self.p = np.asarray(self.p, dtype=np.float64)
        self.wer = np.asarray(self.wer, dtype=np.float64)
        self.shots = np.asarray(self.shots, dtype=np.int64)
        self.failures = np.asarray(self.failures, dtype=np.int64)
        lengths = {len(self.n), len(self.p), len(self.wer), len(self.shots), len(self.failures)}
        if len(lengths) != 1:
            raise ValueError("all columns must have equal length")

    @classmethod
    def from_rows(cls, rows: Sequence[tuple]) -> "FssDataset":
        """Rows of (n, p, wer, shots, failures)."""
        arr = np.array(rows, dtype=np.float64).reshape(-1, 5)
        return cls(arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3], arr[:, 4])

    def __len__(self) -> int:
        return len(self.n)


@dataclass
class FssResult:
    p_inf: float
    nu: float
    poly_coeffs: list[float]
    rss: float
    ci_p_inf: tuple[float, float] | None
    ci_nu: tuple[float, float] | None
    window: float


@dataclass
class LinearizedFit:
    p_inf: float
    c: float
    ci: tuple[float, float]


def _window_rows(
    data: FssDataset, per_size_pstar: Mapping[int, float], window: float
) -> np.ndarray:
    pstar = np.array([per_size_pstar.get(int(n), np.nan) for n in data.n])
    if np.isnan(pstar).any():
        missing = sorted({int(n) for n, ps in zip(data.n, pstar) if np.isnan(ps)})
        raise FssWindowError(f"no per-size p* supplied for sizes {missing}")
    mask = np.abs(data.p - pstar) < window
    sizes = np.unique(data.n[mask])
    if len(sizes) < 2:
        raise FssWindowError(
            f"window {window} keeps {len(sizes)} size(s); a collapse needs >= 2"
        )
    for size in sizes:
        count = int(((data.n == size) & mask).sum())
        if count < 4:
            raise FssWindowError(
                f"window {window} keeps only {count} point(s) for n={int(size)}; need >= 4"
            )
    return mask


def _cubic_fit(u: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, float]:
    """Exact degree-3 least squares via column-scaled normal equations.
    Returns (coeffs ascending order, rss)."""
    design = np.vander(u, 4, increasing=True)
    scale = np.abs(design).max(axis=0)
    scale[scale == 0] = 1.0
    scaled = design / scale
    gram = scaled.T @ scaled
    rhs = scaled.T @ y
    try:
        coeffs = np.linalg.solve(gram, rhs) / scale
    except np.linalg.LinAlgError:
        coeffs = np.linalg.lstsq(scaled, y, rcond=None)[0] / scale
    resid = y - design @ coeffs
    return coeffs, float(resid @ resid)


def _collapse_rss(p_inf: float, nu: float, n: np.ndarray, p: np.ndarray, wer: np.ndarray):
    u = (p - p_inf) * n.astype(np.float64) ** (1.0 / nu)
    return _cubic_fit(u, wer)


def fit_collapse(
    data: FssDataset,
    per_size_pstar: Mapping[int, float],
    window: float = 0.06,
    p_inf_range: tuple[float, float, float] = (0.40, 0.55, 0.002),
    nu_range: tuple[float, float, float] = (0.6, 2.5, 0.02),
    refine: bool = True,
) -> FssResult:
    """Collapse fit: coarse grid over (p_inf, nu), then simplex refinement.
    Deterministic; refuses when the windowed dataset is too small."""
    mask = _window_rows(data, per_size_pstar, window)
    n = data.n[mask]
    p = data.p[mask]
    wer = data.wer[mask]

    p_grid = np.arange(p_inf_range[0], p_inf_range[1] + 1e-12, p_inf_range[2])
    nu_grid = np.arange(nu_range[0], nu_range[1] + 1e-12, nu_range[2])
    best = (np.inf, p_grid[0], nu_grid[0])
    for nu in nu_grid:
        nfac = n.astype(np.float64) ** (1.0 / nu)
        for p_inf in p_grid:
            _, rss = _cubic_fit((p - p_inf) * nfac, wer)
            if rss < best[0]:
                best = (rss, p_inf, nu)
    rss_best, p_best, nu_best = best

    if refine:

        def objective(x):
            p_inf, nu = x
            if not (0.0 < p_inf < 1.0 and 0.05 < nu < 20.0):
                return np.inf
            return _collapse_rss(p_inf, nu, n, p, wer)[1]

        res = minimize(
            objective,
            x0=np.array([p_best, nu_best]),
            method="Nelder-Mead",
            options={"xatol": 1e-9, "fatol": 1e-16, "maxiter": 4000, "maxfev": 4000},
        )
        if res.fun <= rss_best:
            rss_best = float(res.fun)
            p_best, nu_best = float(res.x[0]), float(res.x[1])

    coeffs, rss_final = _collapse_rss(p_best, nu_best, n, p, wer)
    return FssResult(
        p_inf=float(p_best),
        nu=float(nu_best),
        poly_coeffs=[float(c) for c in coeffs],
        rss=rss_final,
        ci_p_inf=None,
        ci_nu=None,
        window=window,
    )


def bootstrap_fss(
    data: FssDataset,
    per_size_pstar: Mapping[int, float],
    base: FssResult,
    iterations: int = 500,
    bootstrap_seed: int = 0,
    confidence: float = 0.95,
) -> tuple[tuple[float, float], tuple[float, float], int, bool]:
    """Parametric bootstrap of the collapse fit: redraw failure counts from
    Binomial(shots, wer) per point and refit (simplex from the base
    optimum). Returns (ci_p_inf, ci_nu, n_skipped, flagged); flagged means
    more than 10% of refits failed."""
    mask = _window_rows(data, per_size_pstar, base.window)
    n = data.n[mask]
    p = data.p[mask]
    wer = data.wer[mask]
    shots = data.shots[mask]

    rng = np.random.default_rng(bootstrap_seed)
    collected_p = []
    collected_nu = []
    skipped = 0
    x0 = np.array([base.p_inf, base.nu])
    for _ in range(iterations):
        wer_star = rng.binomial(shots, wer) / shots

        def objective(x):
            p_inf, nu = x
            if not (0.0 < p_inf < 1.0 and 0.05 < nu < 20.0):
                return np.inf
            return _collapse_rss(p_inf, nu, n, p, wer_star)[1]

        res = minimize(
            objective,
            x0=x0,
            method="Nelder-Mead",
            options={"xatol": 1e-7, "fatol": 1e-14, "maxiter": 800, "maxfev": 800},
        )
        if not np.isfinite(res.fun):
            skipped += 1
            continue
        collected_p.append(float(res.x[0]))
        collected_nu.append(float(res.x[1]))

    if not collected_p:
        raise RuntimeError("all bootstrap refits failed")
    alpha = 100.0 * (1.0 - confidence) / 2.0
    qs = [alpha, 100.0 - alpha]
    ci_p = tuple(float(v) for v in np.percentile(collected_p, qs))
    ci_nu = tuple(float(v) for v in np.percentile(collected_nu, qs))
    flagged = skipped > 0.10 * iterations
    return ci_p, ci_nu, skipped, flagged


def window_sensitivity(
    data: FssDataset,
    per_size_pstar: Mapping[int, float],
    windows: Sequence[float] = (0.04, 0.06, 0.08),
    **fit_kwargs,
) -> tuple[dict[float, FssResult | None], float]:
    """One collapse fit per window; infeasible windows are reported as None.
    The systematic spread is the max pairwise |delta p_inf| over feasible
    fits (0.0 when fewer than two are feasible)."""
    results: dict[float, FssResult | None] = {}
    for w in windows:
        try:
            results[w] = fit_collapse(data, per_size_pstar, window=w, **fit_kwargs)
        except FssWindowError:
            results[w] = None
    values = [r.p_inf for r in results.values() if r is not None]
    spread = 0.0
    if len(values) >= 2:
        spread = float(max(values) - min(values))
    return results, spread


def fit_linearized(
    pstars: Mapping[int, tuple[float, float]],
    nu: float,
    confidence: float = 0.95,
) -> LinearizedFit:
    """Weighted least squares of p*(N) against N^(-1/nu): under leading-
    order scaling p*(N) ~ p_inf + c N^(-1/nu), the intercept estimates the
    asymptotic threshold. Weights come from per-size CI half-widths; if any
    half-width is non-positive the fit falls back to uniform weights. The
    intercept CI is standard-error based."""
    if len(pstars) < 3:
        raise ValueError(f"linearized fit needs >= 3 sizes, got {len(pstars)}")
    if nu <= 0:
        raise ValueError("nu must be positive")
    sizes = np.array(sorted(pstars), dtype=np.float64)
    y = np.array([pstars[int(s)][0] for s in sizes])
    hw = np.array([pstars[int(s)][1] for s in sizes])
    x = sizes ** (-1.0 / nu)

    weights = 1.0 / hw**2 if (hw > 0).all() else np.ones_like(y)
    design = np.column_stack([x, np.ones_like(x)])
    sw = np.sqrt(weights)
    coef, *_ = np.linalg.lstsq(design * sw[:, None], y * sw, rcond=None)
    slope, intercept = float(coef[0]), float(coef[1])

    resid = y - design @ coef
    dof = len(y) - 2
    sigma2 = float((weights * resid**2).sum() / dof) if dof > 0 else 0.0
    cov = sigma2 * np.linalg.inv((design * weights[:, None]).T @ design)
    z = float(norm.ppf(0.5 + confidence / 2.0))
    half = z * float(np.sqrt(max(cov[1, 1], 0.0)))
    return LinearizedFit(p_inf=intercept, c=slope, ci=(intercept - half, intercept + half))
