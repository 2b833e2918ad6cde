"""Scalar indicators, conformity with the ideal rank power law, and the
four-indicator summary of a research system."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ranking import PercentileProfile

__all__ = [
    "Conformity",
    "ConformityClass",
    "IndicatorQuartet",
    "IndicatorRow",
    "mnc",
    "uncited_share",
    "spread",
    "classify_conformity",
    "pearson",
    "quartet",
    "indicator_row",
]

DEFAULT_TOLERANCE = 0.15


class Conformity(str, enum.Enum):
    IDEAL = "ideal"
    INCREASING = "increasing"
    DECREASING = "decreasing"
    IRREGULAR = "irregular"
    INSUFFICIENT = "insufficient"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ConformityClass:
    label: Conformity
    spread: float

    def __str__(self) -> str:
        return self.label.value


@dataclass(frozen=True)
class IndicatorQuartet:
    size: int
    lower_tail: float
    mid: float
    upper_extreme: float
    tolerance: float = DEFAULT_TOLERANCE

    @property
    def tails_agree(self) -> bool | None:
        """Whether lower tail and mid indicators agree within tolerance.

        This is the equality check used to tell ideal from deviating
        systems with only two ratios; ``None`` when either is unsupported.
        """
        if math.isnan(self.lower_tail) or math.isnan(self.mid):
            return None
        return spread([self.lower_tail, self.mid]) < self.tolerance


@dataclass(frozen=True)
class IndicatorRow:
    label: str
    P: int
    p0: float
    mnc: float
    profile: PercentileProfile
    conformity: ConformityClass


def _nonempty(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("empty citation sample")
    return arr


def mnc(citations) -> float:
    """Mean number of citations."""
    return float(np.mean(_nonempty(citations)))


def uncited_share(citations) -> float:
    arr = _nonempty(citations)
    return float(np.count_nonzero(arr == 0) / arr.size)


def spread(ratios: Sequence[float]) -> float:
    """Relative spread ``(max - min) / mean`` of the given ratios."""
    vals = [r for r in ratios if not math.isnan(r)]
    if not vals:
        return float("nan")
    mean = sum(vals) / len(vals)
    if mean == 0:
        return 0.0 if max(vals) == min(vals) else float("inf")
    return (max(vals) - min(vals)) / mean


def classify_conformity(profile_or_ratios, tolerance: float = DEFAULT_TOLERANCE) -> ConformityClass:
    """Classify serial percentile ratios against the ideal model.

    Accepts a :class:`PercentileProfile` or the four ratios in serial order
    (``nan`` for unsupported ones).  Rules are applied in order:
    fewer than three supported ratios is ``insufficient``; a spread below
    ``tolerance`` is ``ideal``; strictly monotone ratios are ``increasing``
    or ``decreasing``; anything else is ``irregular``.
    """
    if isinstance(profile_or_ratios, PercentileProfile):
        ratios = profile_or_ratios.serial_ratios
    else:
        ratios = list(profile_or_ratios)
    vals = [r for r in ratios if not math.isnan(r)]
    s = spread(vals)
    if len(vals) < 3:
        return ConformityClass(Conformity.INSUFFICIENT, s)
    if s < tolerance:
        return ConformityClass(Conformity.IDEAL, s)
    steps = [b - a for a, b in zip(vals, vals[1:])]
    if all(d > 0 for d in steps):
        return ConformityClass(Conformity.INCREASING, s)
    if all(d < 0 for d in steps):
        return ConformityClass(Conformity.DECREASING, s)
    return ConformityClass(Conformity.IRREGULAR, s)


def pearson(xs, ys) -> float:
    """Sample Pearson correlation coefficient.

    Raises ``ValueError`` for mismatched lengths, fewer than three points or
    a constant sequence.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("pearson needs two 1-d sequences of equal length")
    if x.size < 3:
        raise ValueError("pearson needs at least 3 points")
    dx = x - x.mean()
    dy = y - y.mean()
    nx, ny = np.linalg.norm(dx), np.linalg.norm(dy)
    if nx == 0 or ny == 0:
        raise ValueError("correlation is undefined for a constant sequence")
    u, v = dx / nx, dy / ny
    # r = 1 - |u - v|^2 / 2 loses nothing near r = +-1, where u.v would
    # round to a neighbour of 1
    if np.dot(u, v) >= 0:
        d = u - v
        r = 1.0 - 0.5 * np.dot(d, d)
    else:
        d = u + v
        r = 0.5 * np.dot(d, d) - 1.0
    return float(min(1.0, max(-1.0, r)))


def quartet(profile: PercentileProfile, tolerance: float = DEFAULT_TOLERANCE) -> IndicatorQuartet:
    """Size, lower tail (top50/P), mid (top5/top10) and upper extreme (top1/top10)."""
    return IndicatorQuartet(
        size=profile.P,
        lower_tail=profile.ratio(50, 100),
        mid=profile.ratio(5, 10),
        upper_extreme=profile.ratio(1, 10),
        tolerance=tolerance,
    )


def indicator_row(label: str, citations, profile: PercentileProfile,
                  tolerance: float = DEFAULT_TOLERANCE) -> IndicatorRow:
    return IndicatorRow(
        label=label,
        P=profile.P,
        p0=uncited_share(citations),
        mnc=mnc(citations),
        profile=profile,
        conformity=classify_conformity(profile, tolerance),
    )
