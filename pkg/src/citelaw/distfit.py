"""Shape of citation distributions: log-binned histograms, normal probability
plots of log citations, lognormal fits and Kolmogorov-Smirnov tests."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .prng import Prng
from .errors import InsufficientDataError

__all__ = [
    "LogHistogram",
    "NppSeries",
    "LognormalFit",
    "KsResult",
    "normal_cdf",
    "inv_normal_cdf",
    "standard_normal",
    "log_histogram",
    "npp",
    "resolve_shift",
    "fit_lognormal",
    "ks_statistic",
    "kolmogorov_sf",
    "ks_test",
    "band_pvalue",
]

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)

# Acklam's rational approximation to the normal quantile (|rel. error| < 1.15e-9).
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def normal_cdf(x):
    """Standard normal CDF, accurate in both tails."""
    return 0.5 * erfc(-np.asarray(x, dtype=float) / _SQRT2)


def _acklam_lower(p: np.ndarray) -> np.ndarray:
    # valid for 0 < p <= 0.5
    z = np.empty_like(p)
    tail = p < _P_LOW
    if tail.any():
        q = np.sqrt(-2.0 * np.log(p[tail]))
        num = ((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]
        den = (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        z[tail] = num / den
    mid = ~tail
    if mid.any():
        q = p[mid] - 0.5
        r = q * q
        num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
        den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
        z[mid] = num / den
    return z


def inv_normal_cdf(p):
    """Standard normal quantile.

    Acklam's rational approximation followed by one Newton step on the
    normal CDF.  The upper half is obtained by symmetry from ``1 - p``, which
    is exact in floating point for ``p >= 0.5``; absolute error stays below
    1e-9 down to ``p = 1e-12``.

    Parameters
    ----------
    p : float or array_like
        Probabilities strictly inside (0, 1).

    Returns
    -------
    float or ndarray
        ``z`` with ``normal_cdf(z) == p``.
    """
    arr = np.asarray(p, dtype=float)
    if np.any(~((arr > 0.0) & (arr < 1.0))):
        raise ValueError("inv_normal_cdf is defined only for 0 < p < 1")
    flat = np.atleast_1d(arr).ravel()
    upper = flat > 0.5
    q = np.where(upper, 1.0 - flat, flat)
    z = _acklam_lower(q)
    # Newton step: z -= (Phi(z) - q) / phi(z)
    err = normal_cdf(z) - q
    z = z - err * _SQRT2PI * np.exp(0.5 * z * z)
    z = np.where(upper, -z, z)
    z[flat == 0.5] = 0.0
    if arr.ndim == 0:
        return float(z[0])
    return z.reshape(arr.shape)


def standard_normal(prng: Prng, size) -> np.ndarray:
    """Standard normal variates by inversion of open-interval uniforms."""
    return inv_normal_cdf(prng.uniform_open(size))


@dataclass(frozen=True)
class LogHistogram:
    """Histogram over bins {0}, {1}, {2}, [3, 4], [5, 8], [9, 16], ..."""

    lower: np.ndarray
    upper: np.ndarray
    freq: np.ndarray

    @property
    def total(self) -> int:
        return int(self.freq.sum())

    @property
    def bins(self) -> list[tuple[int, int, int]]:
        return list(zip(self.lower.tolist(), self.upper.tolist(), self.freq.tolist()))


def _bin_edges(max_value: int) -> tuple[np.ndarray, np.ndarray]:
    lower, upper = [0, 1, 2], [0, 1, 2]
    hi = 2
    while hi < max_value:
        lower.append(hi + 1)
        hi *= 2
        upper.append(hi)
    return np.array(lower, dtype=np.int64), np.array(upper, dtype=np.int64)


def log_histogram(citations) -> LogHistogram:
    """Counts of papers in unit bins for 0, 1 and 2 citations and in
    doubling bins ``[2**k + 1, 2**(k+1)]`` above that; trailing empty bins
    are dropped."""
    c = np.asarray(citations, dtype=np.int64)
    if c.size == 0:
        raise ValueError("empty citation sample")
    if (c < 0).any():
        raise ValueError("citations must be nonnegative")
    lower, upper = _bin_edges(int(c.max()))
    idx = np.searchsorted(upper, c, side="left")
    freq = np.bincount(idx, minlength=len(upper))
    last = int(np.nonzero(freq)[0][-1]) + 1
    return LogHistogram(lower[:last], upper[:last], freq[:last])


@dataclass(frozen=True)
class NppSeries:
    position: np.ndarray
    z: np.ndarray
    value: np.ndarray
    shift: int

    @property
    def n(self) -> int:
        return len(self.position)


def resolve_shift(citations, shift: int | None) -> int:
    """Default shift is 1 when any paper is uncited, 0 otherwise."""
    c = np.asarray(citations)
    has_zero = bool((c == 0).any())
    if shift is None:
        return 1 if has_zero else 0
    if shift not in (0, 1):
        raise ValueError("shift must be 0 or 1")
    if shift == 0 and has_zero:
        raise ValueError("zero citations present; log requires shift=1")
    return shift


def npp(citations, shift: int | None = None) -> NppSeries:
    """Normal probability plot points of ``ln(c + shift)``.

    The i-th smallest value (1-based) is plotted at position
    ``(i - 0.5) / n`` against its standard normal quantile.
    """
    c = np.sort(np.asarray(citations, dtype=float))
    if c.size == 0:
        raise ValueError("empty citation sample")
    shift = resolve_shift(c, shift)
    n = c.size
    pos = (np.arange(1, n + 1) - 0.5) / n
    return NppSeries(pos, inv_normal_cdf(pos), np.log(c + shift), shift)


@dataclass(frozen=True)
class LognormalFit:
    mu: float
    sigma: float
    shift: int
    n: int


def _log_sample(citations, shift):
    c = np.asarray(citations, dtype=float)
    shift = resolve_shift(c, shift)
    return np.log(c + shift), shift


def fit_lognormal(citations, shift: int | None = None) -> LognormalFit:
    """Mean and sample standard deviation (n - 1) of ``ln(c + shift)``."""
    x, shift = _log_sample(citations, shift)
    if x.size < 2:
        raise InsufficientDataError("lognormal fit needs at least 2 values")
    if np.all(x == x[0]):
        raise InsufficientDataError("degenerate sample: all values are equal")
    return LognormalFit(float(x.mean()), float(x.std(ddof=1)), shift, int(x.size))


@dataclass(frozen=True)
class KsResult:
    d: float
    p_value: float
    n: int
    method: str
    mu: float
    sigma: float
    shift: int = 0

    @property
    def band(self) -> str:
        return band_pvalue(self.p_value)


def ks_statistic(values, mu: float, sigma: float) -> float:
    """Two-sided KS distance between the sample and N(mu, sigma)."""
    x = np.sort(np.asarray(values, dtype=float))
    n = x.size
    f = normal_cdf((x - mu) / sigma)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def _ks_rows(samples: np.ndarray) -> np.ndarray:
    # D for every row of ``samples``, each row refitted with its own mean/sd
    x = np.sort(samples, axis=1)
    n = x.shape[1]
    mu = x.mean(axis=1, keepdims=True)
    sd = x.std(axis=1, ddof=1, keepdims=True)
    f = normal_cdf((x - mu) / sd)
    i = np.arange(1, n + 1)
    return np.maximum((i / n - f).max(axis=1), (f - (i - 1) / n).max(axis=1))


def kolmogorov_sf(lam: float) -> float:
    """Survival function of the Kolmogorov distribution."""
    if lam < 0.2:
        return 1.0
    total = 0.0
    for k in range(1, 101):
        term = (-1) ** (k - 1) * math.exp(-2.0 * k * k * lam * lam)
        total += term
        if abs(term) < 1e-16:
            break
    return min(1.0, max(0.0, 2.0 * total))


def ks_test(
    citations,
    shift: int | None = None,
    mc_runs: int = 5000,
    seed: int = 0,
    method: str = "lilliefors",
    *,
    log_values: bool = False,
    chunk: int = 1000,
) -> KsResult:
    """Kolmogorov-Smirnov test of normality of the log citations.

    ``method="lilliefors"`` obtains the p-value by Monte Carlo under the
    estimated-parameter null: ``mc_runs`` samples of size n are drawn from
    the fitted normal, each is refitted, and the p-value is the fraction of
    simulated distances at least as large as the observed one.  The draw is
    a single SplitMix64 stream seeded with ``seed``, so results are
    reproducible.  ``method="ks"`` treats the fitted parameters as known
    and uses the asymptotic Kolmogorov distribution with Stephens' small
    sample correction.

    With ``log_values=True`` the input is taken as already log-transformed.
    """
    if log_values:
        x = np.asarray(citations, dtype=float)
        shift = 0
    else:
        x, shift = _log_sample(citations, shift)
    n = x.size
    if n < 5:
        raise InsufficientDataError("KS test needs at least 5 values")
    if np.all(x == x[0]):
        raise InsufficientDataError("degenerate sample: all values are equal")
    mu, sigma = float(x.mean()), float(x.std(ddof=1))
    d = ks_statistic(x, mu, sigma)

    if method == "ks":
        sn = math.sqrt(n)
        p = kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d)
        return KsResult(d, p, n, "ks", mu, sigma, shift)
    if method != "lilliefors":
        raise ValueError(f"unknown KS method {method!r}")
    if mc_runs < 1000:
        raise ValueError("Monte Carlo Lilliefors needs mc_runs >= 1000")

    prng = Prng(seed)
    exceed = 0
    done = 0
    while done < mc_runs:
        m = min(chunk, mc_runs - done)
        sims = mu + sigma * standard_normal(prng, (m, n))
        # tiny slack so that exact ties in D are counted as exceedances
        exceed += int(np.count_nonzero(_ks_rows(sims) >= d - 1e-15))
        done += m
    return KsResult(d, exceed / mc_runs, n, "lilliefors", mu, sigma, shift)


def band_pvalue(p: float) -> str:
    """Report a p-value the way tables of KS results usually do."""
    if p < 0.01:
        return "< 0.01"
    if p > 0.15:
        return "> 0.15"
    return f"{p:.2f}"
