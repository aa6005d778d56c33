"""Pseudo-threshold search: the erasure rate where WER crosses a target.

The recipe: step from p = 0.38 in increments of 0.04 until the target is
bracketed (downward when the first probe is already above target), then
refine by false position with the Illinois anti-stagnation modification,
stopping when the bracket is narrower than 5e-4 or after 10 total
evaluations (bracketing included). The reported p* is the linear
interpolant inside the final bracket, and its CI comes from a parametric
bootstrap that redraws binomial failure counts at the two bracket points.

Evaluations are cached by p quantized to 1e-9, so refinement revisits and
the bootstrap reuse bracket points without re-simulation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .montecarlo import WerPoint


class NoCrossingError(RuntimeError):
    """The WER never reaches the target within the probed range/budget."""


class BudgetExhausted(RuntimeError):
    """Internal: the evaluation budget was consumed."""


@dataclass
class Bracket:
    p_lo: float
    p_hi: float
    wer_lo: float
    wer_hi: float


@dataclass
class ThresholdResult:
    p_star: float
    ci_lo: float
    ci_hi: float
    target_wer: float
    evaluations: list[WerPoint]
    bracket: Bracket
    clamp_count: int = 0
    warning: str | None = None


class WerEvaluator:
    """Budgeted, cached p -> WerPoint evaluator shared by bracketing and
    refinement; `evals` counts unique (quantized) probes."""

    def __init__(self, fn, max_evals: int = 10):
        self.fn = fn
        self.max_evals = max_evals
        self._cache: dict[int, WerPoint] = {}
        self.trace: list[WerPoint] = []

    @property
    def evals(self) -> int:
        return len(self._cache)

    def cached(self, p: float) -> WerPoint | None:
        return self._cache.get(round(p * 1e9))

    def __call__(self, p: float) -> WerPoint:
        key = round(p * 1e9)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if self.evals >= self.max_evals:
            raise BudgetExhausted(f"evaluation budget {self.max_evals} exhausted")
        point = self.fn(p)
        self._cache[key] = point
        self.trace.append(point)
        return point


def bracket_upward(
    wer_at: WerEvaluator,
    start: float = 0.38,
    step: float = 0.04,
    target: float = 0.10,
    p_min: float = 0.02,
    p_max: float = 0.98,
) -> tuple[float, float]:
    """Consecutive grid points (p_lo, p_hi) with wer(p_lo) <= target <=
    wer(p_hi). Steps upward from `start`; if the first probe is already
    above target, steps downward instead (same step, same budget)."""
    try:
        first = wer_at(start)
        if first.wer <= target:
            prev = start
            p = round(start + step, 9)
            while p <= p_max + 1e-12:
                if wer_at(p).wer > target:
                    return prev, p
                prev = p
                p = round(p + step, 9)
        else:
            prev = start
            p = round(start - step, 9)
            while p >= p_min - 1e-12:
                if wer_at(p).wer < target:
                    return p, prev
                prev = p
                p = round(p - step, 9)
    except BudgetExhausted as exc:
        raise NoCrossingError(
            f"no WER={target} crossing bracketed within the {wer_at.max_evals}-evaluation budget"
        ) from exc
    raise NoCrossingError(
        f"WER never crosses {target} for p in [{p_min}, {p_max}]"
    )


def illinois_refine(
    wer_at: WerEvaluator,
    bracket: tuple[float, float],
    tol: float = 5e-4,
    max_total_evals: int = 10,
    target: float = 0.10,
) -> ThresholdResult:
    """False position with the Illinois modification: when the same
    endpoint is retained twice running, its g-value is halved to prevent
    stagnation. The returned CI is a placeholder (p_star itself) until
    bootstrap_pstar_ci fills it in."""
    p_lo, p_hi = bracket
    w_lo = wer_at(p_lo)
    w_hi = wer_at(p_hi)
    if not (w_lo.wer <= target <= w_hi.wer):
        raise ValueError(
            f"invalid bracket: wer({p_lo})={w_lo.wer}, wer({p_hi})={w_hi.wer}, target={target}"
        )

    g_lo_eff = w_lo.wer - target
    g_hi_eff = w_hi.wer - target
    side = 0
    warning = None

    while (p_hi - p_lo) >= tol and wer_at.evals < max_total_evals:
        denom = g_hi_eff - g_lo_eff
        if denom == 0.0:
            warning = "degenerate bracket (g_lo == g_hi); using midpoint"
            break
        c = p_hi - g_hi_eff * (p_hi - p_lo) / denom
        if not (p_lo < c < p_hi):
            c = 0.5 * (p_lo + p_hi)
        try:
            w_c = wer_at(c)
        except BudgetExhausted:
            break
        g_c = w_c.wer - target
        if g_c > 0.0:
            p_hi, w_hi = c, w_c
            g_hi_eff = g_c
            if side == 1:
                g_lo_eff *= 0.5
            side = 1
        else:
            p_lo, w_lo = c, w_c
            g_lo_eff = g_c
            if side == -1:
                g_hi_eff *= 0.5
            side = -1

    if w_hi.wer == w_lo.wer:
        p_star = 0.5 * (p_lo + p_hi)
        warning = warning or "degenerate final bracket (equal WER); using midpoint"
    else:
        p_star = p_lo + (target - w_lo.wer) * (p_hi - p_lo) / (w_hi.wer - w_lo.wer)

    return ThresholdResult(
        p_star=p_star,
        ci_lo=p_star,
        ci_hi=p_star,
        target_wer=target,
        evaluations=list(wer_at.trace),
        bracket=Bracket(p_lo=p_lo, p_hi=p_hi, wer_lo=w_lo.wer, wer_hi=w_hi.wer),
        warning=warning,
    )


def bootstrap_pstar_ci(
    point_lo: WerPoint,
    point_hi: WerPoint,
    iterations: int = 5000,
    confidence: float = 0.95,
    bootstrap_seed: int = 0,
    target: float = 0.10,
) -> tuple[float, float, int]:
    """Parametric bootstrap at the bracket points: redraw failures from
    Binomial(shots, wer) at each endpoint, recompute the linear crossing,
    take percentiles. Pairs that fail to straddle the target are clamped
    into the bracket and counted. Returns (lo, hi, clamp_count)."""
    rng = np.random.default_rng(bootstrap_seed)
    f_lo = rng.binomial(point_lo.shots, point_lo.wer, size=iterations)
    f_hi = rng.binomial(point_hi.shots, point_hi.wer, size=iterations)
    wer_lo = f_lo / point_lo.shots
    wer_hi = f_hi / point_hi.shots

    p_lo, p_hi = point_lo.p, point_hi.p
    denom = wer_hi - wer_lo
    safe = np.where(denom == 0.0, 1.0, denom)
    raw = np.where(
        denom == 0.0,
        0.5 * (p_lo + p_hi),
        p_lo + (target - wer_lo) * (p_hi - p_lo) / safe,
    )
    straddle = (wer_lo <= target) & (target <= wer_hi)
    clamp_count = int((~straddle).sum())
    stars = np.clip(raw, p_lo, p_hi)

    alpha = 100.0 * (1.0 - confidence) / 2.0
    lo, hi = np.percentile(stars, [alpha, 100.0 - alpha])
    return float(lo), float(hi), clamp_count


def find_threshold(
    evaluate,
    target: float = 0.10,
    tol: float = 5e-4,
    max_evals: int = 10,
    bootstrap_iterations: int = 5000,
    bootstrap_seed: int = 0,
    confidence: float = 0.95,
    start: float = 0.38,
    step: float = 0.04,
) -> ThresholdResult:
    """Full search: bracket, refine, bootstrap. `evaluate` maps p to a
    WerPoint; it is wrapped in a shared budgeted cache so the total
    simulation cost never exceeds max_evals evaluations."""
    wer_at = WerEvaluator(evaluate, max_evals)
    bracket = bracket_upward(wer_at, start=start, step=step, target=target)
    result = illinois_refine(wer_at, bracket, tol=tol, max_total_evals=max_evals, target=target)
    lo_point = wer_at.cached(result.bracket.p_lo)
    hi_point = wer_at.cached(result.bracket.p_hi)
    ci_lo, ci_hi, clamps = bootstrap_pstar_ci(
        lo_point,
        hi_point,
        iterations=bootstrap_iterations,
        confidence=confidence,
        bootstrap_seed=bootstrap_seed,
        target=target,
    )
    # percentile CIs can exclude the interpolant under extreme skew; widen
    ci_lo = min(ci_lo, result.p_star)
    ci_hi = max(ci_hi, result.p_star)
    return replace(result, ci_lo=ci_lo, ci_hi=ci_hi, clamp_count=clamps)
