"""Diagnostic artifacts in data form: lag scatters and CCF comparison tables.

These functions produce the numbers behind the usual plots (lagged
scatter clouds with least-squares lines, sample versus theoretical
cross-correlation functions) without rendering anything; the CLI writes
them out as delimited text.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import linregress

from .estimators import sample_ccf
from .filters import AR1, FRACTIONAL
from .models import BivariateSeries, theoretical_ccf, theoretical_exponents

MAX_SCATTER_POINTS = 5_000


@dataclass(frozen=True)
class LagScatter:
    """Aligned (x_{t+lag}, y_t) point cloud and its least-squares line.

    The fit regresses x_{t+lag} on y_t over all n_pairs = T - |lag|
    aligned points.  ``pairs`` is capped at MAX_SCATTER_POINTS by
    deterministic stride subsampling (plotting payload only; the fit
    always uses every point).
    """

    lag: int
    pairs: np.ndarray
    n_pairs: int
    ls_slope: float
    ls_intercept: float
    ls_stderr: float

    def __post_init__(self):
        pairs = np.asarray(self.pairs, dtype=float)
        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise ValueError("pairs must be an (n, 2) array")
        pairs.setflags(write=False)
        object.__setattr__(self, "pairs", pairs)


def lag_scatter(series: BivariateSeries, lag: int) -> LagScatter:
    """Aligned point set at one lag with its OLS slope and intercept.

    Positive lag pairs x_{t+lag} with y_t, negative lag shifts y, the
    same alignment sample_ccf uses.  |lag| must be < T.
    """
    lag = int(lag)
    T = len(series)
    if abs(lag) >= T:
        raise ValueError(f"|lag| = {abs(lag)} must be < T = {T}")
    k = abs(lag)
    if lag >= 0:
        xs, ys = series.x[k:], series.y[: T - k]
    else:
        xs, ys = series.x[: T - k], series.y[k:]
    res = linregress(ys, xs)
    stride = max(1, math.ceil(xs.size / MAX_SCATTER_POINTS))
    pairs = np.column_stack([xs[::stride], ys[::stride]])
    return LagScatter(
        lag=lag,
        pairs=pairs,
        n_pairs=xs.size,
        ls_slope=float(res.slope),
        ls_intercept=float(res.intercept),
        ls_stderr=float(res.stderr),
    )


@dataclass(frozen=True)
class CcfComparison:
    """Sample versus theoretical CCF at lags -L..L with disagreement flags.

    ``flagged`` marks lags where |sample - theory| exceeds
    3/sqrt(T) + truncation_bound, a Bartlett-style band widened by the
    theoretical tail cut at K.
    """

    lags: np.ndarray
    sample: np.ndarray
    theory: np.ndarray
    abs_diff: np.ndarray
    flagged: np.ndarray
    T: int
    truncation: int
    threshold: float

    def rows(self):
        """Iterate (lag, sample, theory, abs_diff, flagged) tuples."""
        for i in range(self.lags.size):
            yield (
                int(self.lags[i]),
                float(self.sample[i]),
                float(self.theory[i]),
                float(self.abs_diff[i]),
                bool(self.flagged[i]),
            )


def truncation_bound(model, truncation: int) -> float:
    """Upper estimate of the CCF error from cutting the weight sums at K.

    Fractional pairs contribute a power tail
    sum_{k>K} a_k(d_i) a_k(d_j) ~ K^{d_i+d_j-1} / ((1-d_i-d_j) G(d_i) G(d_j))
    via the a_n ~ n^{d-1}/G(d) asymptote; ar1 components contribute a
    geometric tail and white components none.  Normalized by the
    process standard deviations.
    """
    rep = theoretical_exponents(model, truncation=truncation)
    denom = rep.sigma_x * rep.sigma_y
    if denom == 0.0:
        return 0.0

    def tail(comp, K):
        # crude per-component envelope of sum_{k>K} |a_k| shapes
        if comp.kind == FRACTIONAL and comp.param > 0.0:
            return ("power", comp.param)
        if comp.kind == AR1 and comp.param != 0.0:
            return ("geom", abs(comp.param))
        return ("zero", 0.0)

    K = truncation
    total = 0.0
    for ci in model.x_components:
        for cj in model.y_components:
            w = abs(ci.weight * cj.weight * model.covariance.sigma(ci.slot, cj.slot))
            if w == 0.0:
                continue
            ti, tj = tail(ci, K), tail(cj, K)
            if ti[0] == "zero" or tj[0] == "zero":
                continue
            if ti[0] == "power" and tj[0] == "power":
                di, dj = ti[1], tj[1]
                total += w * K ** (di + dj - 1.0) / (
                    (1.0 - di - dj) * math.gamma(di) * math.gamma(dj)
                )
            else:
                # at least one geometric factor collapses the tail
                theta = ti[1] if ti[0] == "geom" else tj[1]
                total += w * theta**K / (1.0 - theta)
    return total / denom


def ccf_comparison(
    series: BivariateSeries, max_lag: int, truncation: int = 100_000
) -> CcfComparison:
    """Join the sample CCF of a realization with the model's theoretical CCF."""
    sample = sample_ccf(series.x, series.y, max_lag)
    theory = theoretical_ccf(series.model, max_lag=max_lag, truncation=truncation)
    diff = np.abs(sample.values - theory)
    threshold = 3.0 / math.sqrt(sample.T) + truncation_bound(series.model, truncation)
    return CcfComparison(
        lags=sample.lags,
        sample=sample.values,
        theory=theory,
        abs_diff=diff,
        flagged=diff > threshold,
        T=sample.T,
        truncation=truncation,
        threshold=threshold,
    )
