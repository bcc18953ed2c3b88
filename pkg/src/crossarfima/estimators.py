"""Scaling-exponent estimators: sample CCF, DFA, DCCA, HXA, power-law fits.

All estimators are pure functions of their inputs.  DFA/DCCA/HXA operate
on profiles (cumulative sums of demeaned series) and return fluctuation
series whose log-log slope against scale gives the Hurst estimate; the
slope-to-H mapping lives in fit_hurst.  Fluctuation values are kept as
computed, including negative detrended covariances; sign filtering
happens only at the fitting step, with a warning, never via absolute
values.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.stats import linregress

from .errors import DegenerateSeriesError, InsufficientDataError

DFA = "dfa"
DCCA = "dcca"
HXA = "hxa"

MIN_FIT_POINTS = 4


@dataclass(frozen=True)
class CcfSeries:
    """Sample cross-correlations at lags -L..L with the sample size used."""

    lags: np.ndarray
    values: np.ndarray
    T: int

    def __post_init__(self):
        lags = np.asarray(self.lags, dtype=int)
        values = np.asarray(self.values, dtype=float)
        if lags.shape != values.shape or lags.ndim != 1:
            raise ValueError("lags and values must be 1-d arrays of equal length")
        lags.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "lags", lags)
        object.__setattr__(self, "values", values)

    @property
    def max_lag(self) -> int:
        return int(self.lags[-1])

    def at(self, lag: int) -> float:
        """Value at one lag; raises if the lag is outside -L..L."""
        idx = lag + self.max_lag
        if not 0 <= idx < self.values.size:
            raise IndexError(f"lag {lag} outside computed range +-{self.max_lag}")
        return float(self.values[idx])


@dataclass(frozen=True)
class FluctuationSeries:
    """Fluctuation values versus scale for one of the dfa/dcca/hxa methods.

    ``values`` holds F^2(s) for dfa/dcca and K(tau) for hxa, so the H
    estimate is always half the log-log slope.
    """

    scales: np.ndarray
    values: np.ndarray
    method: str

    def __post_init__(self):
        scales = np.asarray(self.scales, dtype=int)
        values = np.asarray(self.values, dtype=float)
        if scales.shape != values.shape or scales.ndim != 1:
            raise ValueError("scales and values must be 1-d arrays of equal length")
        if scales.size and (np.any(scales < 1) or np.any(np.diff(scales) <= 0)):
            raise ValueError("scales must be strictly increasing positive integers")
        if self.method not in (DFA, DCCA, HXA):
            raise ValueError(f"unknown method {self.method!r}")
        scales.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "scales", scales)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.scales.size


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares power-law fit in log-log coordinates."""

    exponent: float
    intercept: float
    stderr: float
    n_points: int
    range: tuple[int, int]


def _demean(z: np.ndarray, name: str) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.ndim != 1:
        raise ValueError(f"{name} must be a 1-d sequence")
    if not np.all(np.isfinite(z)):
        raise ValueError(f"{name} contains non-finite values")
    return z - z.mean()


def sample_ccf(x, y, max_lag: int) -> CcfSeries:
    """Sample cross-correlation rho(k) = corr(x_{t+k}, y_t) for k = -L..L.

    Uses global means and (ddof=0) standard deviations with divisor
    T - |k|, so rho(0) of a series with itself is exactly 1.  Requires
    T > 2L.
    """
    L = int(max_lag)
    if L < 0:
        raise ValueError(f"max_lag must be >= 0, got {L}")
    xc = _demean(x, "x")
    yc = _demean(y, "y")
    if xc.size != yc.size:
        raise ValueError("x and y must have equal length")
    T = xc.size
    if T <= 2 * L:
        raise ValueError(f"need T > 2*max_lag, got T={T}, max_lag={L}")
    sx = np.sqrt(np.mean(xc**2))
    sy = np.sqrt(np.mean(yc**2))
    if sx == 0.0 or sy == 0.0:
        raise DegenerateSeriesError("zero-variance input, cross-correlation undefined")

    values = np.empty(2 * L + 1)
    for k in range(L + 1):
        # lag +k pairs x_{t+k} with y_t, lag -k pairs x_t with y_{t+k}
        n = T - k
        values[L + k] = (xc[k:] @ yc[: n]) / (n * sx * sy)
        values[L - k] = (xc[: n] @ yc[k:]) / (n * sx * sy)
    return CcfSeries(lags=np.arange(-L, L + 1), values=values, T=T)


def _profile(z: np.ndarray) -> np.ndarray:
    return np.cumsum(z)


def _box_residuals(boxes: np.ndarray, order: int) -> np.ndarray:
    """Residuals of per-box polynomial fits against in-box time.

    ``boxes`` has shape (n_boxes, s).  One thin-QR of the shared
    Vandermonde detrends every box at once; equivalent to an
    independent least-squares fit per box.
    """
    s = boxes.shape[1]
    t = np.arange(s, dtype=float)
    V = np.vander(t, order + 1, increasing=True)
    Q, _ = np.linalg.qr(V)
    return boxes - (boxes @ Q) @ Q.T


def dcca(
    x,
    y,
    s_min: int = 10,
    s_max: int | None = None,
    step: int = 10,
    detrend_order: int = 1,
) -> FluctuationSeries:
    """Detrended cross-covariance F^2(s) over box sizes s.

    Profiles are cumulative sums of the demeaned inputs, partitioned
    into non-overlapping boxes from the start of the series (no second
    backward pass).  Each box gets an independent polynomial detrend of
    the given order; F^2(s) is the mean over all boxes and in-box points
    of the product of the two residual profiles.  Values may be
    negative for anti-correlated inputs.  s_max defaults to T//5 and
    must not exceed T//2.
    """
    xc = _demean(x, "x")
    yc = _demean(y, "y")
    if xc.size != yc.size:
        raise ValueError("x and y must have equal length")
    T = xc.size
    if s_max is None:
        s_max = T // 5
    s_min, s_max, step, order = int(s_min), int(s_max), int(step), int(detrend_order)
    if order < 0:
        raise ValueError(f"detrend_order must be >= 0, got {order}")
    if s_min < order + 2:
        raise ValueError(f"s_min must be >= detrend_order + 2 = {order + 2}, got {s_min}")
    if step < 1:
        raise ValueError(f"step must be >= 1, got {step}")
    if s_max > T // 2:
        raise ValueError(f"s_max = {s_max} exceeds T/2 = {T // 2}")
    if s_max < s_min:
        raise ValueError(f"empty scale range [{s_min}, {s_max}]")

    X = _profile(xc)
    Y = _profile(yc)
    same = xc is yc or np.array_equal(xc, yc)

    scales, values = [], []
    for s in range(s_min, s_max + 1, step):
        n_boxes = T // s
        if n_boxes < 1:
            warnings.warn(f"scale {s} skipped: no complete box in T={T}")
            continue
        used = n_boxes * s
        rx = _box_residuals(X[:used].reshape(n_boxes, s), order)
        ry = rx if same else _box_residuals(Y[:used].reshape(n_boxes, s), order)
        scales.append(s)
        values.append(float(np.mean(rx * ry)))
    if not scales:
        raise InsufficientDataError("all scales skipped, nothing to estimate")
    return FluctuationSeries(scales=np.array(scales), values=np.array(values), method=DCCA)


def dfa(
    x,
    s_min: int = 10,
    s_max: int | None = None,
    step: int = 10,
    detrend_order: int = 1,
) -> FluctuationSeries:
    """Detrended fluctuation F^2(s): the x = y special case of dcca."""
    out = dcca(x, x, s_min=s_min, s_max=s_max, step=step, detrend_order=detrend_order)
    return FluctuationSeries(scales=out.scales, values=out.values, method=DFA)


def hxa(x, y, tau_min: int = 1, tau_max: int = 100) -> FluctuationSeries:
    """Height cross-correlation K(tau) of the two profiles at q = 2.

    K(tau) = mean over t of (X_{t+tau} - X_t)(Y_{t+tau} - Y_t) with
    divisor T - tau; scales as tau^(2 H_xy).  Requires
    1 <= tau_min < tau_max <= T/10.
    """
    xc = _demean(x, "x")
    yc = _demean(y, "y")
    if xc.size != yc.size:
        raise ValueError("x and y must have equal length")
    T = xc.size
    tau_min, tau_max = int(tau_min), int(tau_max)
    if not 1 <= tau_min < tau_max:
        raise ValueError(f"need 1 <= tau_min < tau_max, got [{tau_min}, {tau_max}]")
    if tau_max > T // 10:
        raise ValueError(f"tau_max = {tau_max} exceeds T/10 = {T // 10}")

    X = _profile(xc)
    Y = _profile(yc)
    taus = np.arange(tau_min, tau_max + 1)
    values = np.empty(taus.size)
    for i, tau in enumerate(taus):
        dX = X[tau:] - X[:-tau]
        dY = Y[tau:] - Y[:-tau]
        values[i] = (dX @ dY) / (T - tau)
    return FluctuationSeries(scales=taus, values=values, method=HXA)


def powerlaw_fit(scales, values) -> ScalingFit:
    """OLS of log(value) on log(scale); exponent field holds the raw slope.

    Requires at least 4 strictly positive values; callers with possibly
    negative fluctuations must filter first (see fit_hurst).
    """
    scales = np.asarray(scales, dtype=float)
    values = np.asarray(values, dtype=float)
    if scales.shape != values.shape or scales.ndim != 1:
        raise ValueError("scales and values must be 1-d arrays of equal length")
    if scales.size < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"power-law fit needs >= {MIN_FIT_POINTS} points, got {scales.size}"
        )
    if np.any(scales <= 0.0):
        raise ValueError("scales must be positive")
    if np.any(values <= 0.0):
        raise ValueError("values must be positive; filter non-positive entries first")
    res = linregress(np.log(scales), np.log(values))
    return ScalingFit(
        exponent=float(res.slope),
        intercept=float(res.intercept),
        stderr=float(res.stderr),
        n_points=scales.size,
        range=(int(scales.min()), int(scales.max())),
    )


def fit_hurst(fluct: FluctuationSeries) -> ScalingFit:
    """Hurst estimate from a fluctuation series: H = slope/2 in log-log.

    F^2 scales as s^(2H) and K as tau^(2H), so the fitted slope is
    halved (stderr too).  Non-positive fluctuation values cannot enter
    the log fit; they are dropped with a warning, and fewer than 4
    surviving points raises InsufficientData.
    """
    keep = fluct.values > 0.0
    dropped = int(np.count_nonzero(~keep))
    if dropped:
        warnings.warn(
            f"{fluct.method}: {dropped} non-positive fluctuation value(s) "
            f"at scales {fluct.scales[~keep].tolist()} skipped in the fit"
        )
    scales = fluct.scales[keep]
    values = fluct.values[keep]
    if scales.size < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"{fluct.method}: only {scales.size} positive fluctuation values, "
            f"need >= {MIN_FIT_POINTS} for a fit"
        )
    fit = powerlaw_fit(scales, values)
    return ScalingFit(
        exponent=0.5 * fit.exponent,
        intercept=fit.intercept,
        stderr=0.5 * fit.stderr,
        n_points=fit.n_points,
        range=fit.range,
    )
