"""Power-law fits and shape diagnostics of double-rank plots."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .distfit import LogHistogram
from .errors import InsufficientDataError
from .ranking import DoubleRankSeries

__all__ = [
    "PowerLawFit",
    "Curvature",
    "CurvatureClass",
    "ScaledHistogram",
    "fit_power_law",
    "segment_slopes",
    "classify_curvature",
    "downscale_histogram",
    "TOP10",
    "BOTTOM50",
    "FULL",
]

FULL = (0.0, 1.0)
TOP10 = (0.0, 0.1)
BOTTOM50 = (0.5, 1.0)
DEFAULT_CURVATURE_THRESHOLD = 0.02


@dataclass(frozen=True)
class PowerLawFit:
    """``ln(local) = lnC + alpha * ln(global)`` fitted by OLS."""

    alpha: float
    lnC: float
    r2: float
    rank_range: tuple[float, float]
    n_points: int


class Curvature(str, enum.Enum):
    NONE = "none"
    DOWNWARD = "downward"
    UPWARD = "upward"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class CurvatureClass:
    label: Curvature
    quad_coeff: float
    threshold: float

    def __str__(self) -> str:
        return self.label.value


def _in_range(series: DoubleRankSeries, rank_range) -> np.ndarray:
    lo, hi = rank_range
    frac = series.local_rank / series.n_local
    # left-open so adjacent segments never share a point; lo == 0 keeps rank 1
    return (frac > lo) & (frac <= hi)


def fit_power_law(series: DoubleRankSeries, rank_range=FULL) -> PowerLawFit:
    """Least-squares line of ln(local rank) on ln(global rank).

    Only pairs whose local rank fraction ``local_rank / n_local`` lies in
    ``(lo, hi]`` take part.
    """
    mask = _in_range(series, rank_range)
    if mask.sum() < 3:
        raise InsufficientDataError(f"fewer than 3 points in local-rank range {rank_range}")
    x = np.log(series.global_rank[mask].astype(float))
    y = np.log(series.local_rank[mask].astype(float))
    dx = x - x.mean()
    sxx = dx @ dx
    if sxx == 0:
        raise InsufficientDataError("global ranks are constant within the range")
    alpha = (dx @ (y - y.mean())) / sxx
    lnc = y.mean() - alpha * x.mean()
    resid = y - (lnc + alpha * x)
    syy = ((y - y.mean()) ** 2).sum()
    r2 = 1.0 - (resid @ resid) / syy if syy > 0 else 1.0
    return PowerLawFit(float(alpha), float(lnc), float(min(1.0, max(0.0, r2))),
                       tuple(rank_range), int(mask.sum()))


def segment_slopes(series: DoubleRankSeries) -> tuple[float | None, float | None]:
    """Slopes over the local top 10% and bottom 50%; ``None`` when a segment
    has fewer than three points."""
    out = []
    for rng in (TOP10, BOTTOM50):
        try:
            out.append(fit_power_law(series, rng).alpha)
        except InsufficientDataError:
            out.append(None)
    return out[0], out[1]


def classify_curvature(series: DoubleRankSeries,
                       threshold: float = DEFAULT_CURVATURE_THRESHOLD) -> CurvatureClass:
    """Sign of the quadratic term of ln(local) as a polynomial in ln(global).

    Negative beyond ``-threshold`` is downward concavity (a deficit of lowly
    cited papers relative to the global set), positive beyond ``threshold``
    upward concavity (an excess).
    """
    if series.n_local < 10:
        raise InsufficientDataError("curvature needs at least 10 points")
    x = np.log(series.global_rank.astype(float))
    y = np.log(series.local_rank.astype(float))
    # centre x for conditioning; the quadratic coefficient is unaffected
    xc = x - x.mean()
    quad = float(np.polyfit(xc, y, 2)[0])
    if quad < -threshold:
        label = Curvature.DOWNWARD
    elif quad > threshold:
        label = Curvature.UPWARD
    else:
        label = Curvature.NONE
    return CurvatureClass(label, quad, threshold)


@dataclass(frozen=True)
class ScaledHistogram:
    lower: np.ndarray
    upper: np.ndarray
    freq: np.ndarray  # float

    @property
    def total(self) -> float:
        return float(self.freq.sum())


def downscale_histogram(hist: LogHistogram, target_total: int) -> ScaledHistogram:
    """Scale bin frequencies so they sum to ``target_total`` (never upward)."""
    if target_total < 1:
        raise ValueError("target total must be at least 1")
    if target_total > hist.total:
        raise ValueError(f"refusing to upscale from {hist.total} to {target_total}")
    freq = hist.freq * (target_total / hist.total)
    return ScaledHistogram(hist.lower.copy(), hist.upper.copy(), freq)
