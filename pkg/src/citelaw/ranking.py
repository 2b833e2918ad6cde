"""Global ranking, double-rank series and top-percentile counts.

Ranks are 1-based with rank 1 the most cited paper.  Ties in the citation
count are broken by citations per year (descending), publication year
(descending) and finally by id (ascending), so every corpus receives a
strict total order and no fractional allocation at percentile boundaries is
ever needed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .corpus import Corpus, PaperRecord

__all__ = [
    "PERCENTILES",
    "RankedCorpus",
    "DoubleRankSeries",
    "PercentileProfile",
    "total_order",
    "double_rank",
    "top_count",
    "top_counts",
    "percentile_profile",
    "profile_from_ranks",
]

PERCENTILES = (1, 3, 5, 10, 30, 50, 100)

# (label, numerator percentile, denominator percentile); 100 stands for P.
RATIO_DEFS = (
    ("r10_P", 10, 100),
    ("r5_50", 5, 50),
    ("r3_30", 3, 30),
    ("r1_10", 1, 10),
)


@dataclass(frozen=True, eq=False)
class RankedCorpus:
    records: tuple[PaperRecord, ...]
    rank_of: Mapping[str, int]
    reference_year: int

    @property
    def n(self) -> int:
        return len(self.records)

    @property
    def citations(self) -> np.ndarray:
        return np.array([r.citations for r in self.records], dtype=np.int64)

    def ranks_of(self, ids: Iterable[str]) -> np.ndarray:
        """Sorted global ranks of ``ids``; raises ``KeyError`` on unknown ids."""
        try:
            ranks = [self.rank_of[i] for i in ids]
        except KeyError as exc:
            raise KeyError(f"id {exc.args[0]!r} is not in the global corpus") from None
        return np.sort(np.asarray(ranks, dtype=np.int64))


@dataclass(frozen=True)
class DoubleRankSeries:
    local_rank: np.ndarray
    global_rank: np.ndarray
    n_global: int

    @property
    def n_local(self) -> int:
        return len(self.local_rank)

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.local_rank.tolist(), self.global_rank.tolist()))

    @classmethod
    def from_global_ranks(cls, ranks, n_global: int) -> "DoubleRankSeries":
        g = np.sort(np.asarray(ranks, dtype=np.int64))
        return cls(np.arange(1, len(g) + 1, dtype=np.int64), g, int(n_global))


@dataclass(frozen=True)
class PercentileProfile:
    """Top-percentile counts of one group and the four serial ratios.

    ``counts[x]`` is the number of group papers in the global top x%.  The
    ratios follow the ideal-model chain ``P_top10/P, P_top5/P_top50,
    P_top3/P_top30, P_top1/P_top10``; a ratio whose numerator count falls
    below ``min_support`` (or whose denominator is zero) is unsupported and
    stored as ``nan``.
    """

    P: int
    counts: Mapping[int, int]
    min_support: int = 10
    ratios: Mapping[str, float] = field(init=False)

    def __post_init__(self):
        ratios = {}
        for name, num, den in RATIO_DEFS:
            a, b = self.counts[num], self.counts[den]
            ratios[name] = a / b if b > 0 and a >= self.min_support else float("nan")
        object.__setattr__(self, "ratios", ratios)

    def ratio(self, num: int, den: int) -> float:
        a, b = self.counts[num], self.counts[den]
        return a / b if b > 0 and a >= self.min_support else float("nan")

    @property
    def support_mask(self) -> dict[str, bool]:
        return {k: not np.isnan(v) for k, v in self.ratios.items()}

    @property
    def serial_ratios(self) -> list[float]:
        return [self.ratios[name] for name, _, _ in RATIO_DEFS]


def total_order(corpus: Corpus, reference_year: int | None = None) -> RankedCorpus:
    """Rank ``corpus`` under the deterministic total order.

    ``reference_year`` must lie after the publication window; it defaults
    to the year following it.
    """
    if not len(corpus):
        raise ValueError("cannot rank an empty corpus")
    if reference_year is None:
        reference_year = corpus.pub_window[1] + 1
    if reference_year <= corpus.pub_window[1]:
        raise ValueError(
            f"reference year {reference_year} must follow the publication window end {corpus.pub_window[1]}"
        )

    recs = corpus.records
    cites = np.fromiter((r.citations for r in recs), dtype=np.int64, count=len(recs))
    years = np.fromiter((r.year for r in recs), dtype=np.int64, count=len(recs))
    ids = np.array([r.id for r in recs], dtype=str)
    per_year = cites / (reference_year - years)
    # lexsort: last key is primary
    order = np.lexsort((ids, -years, -per_year, -cites))
    ordered = tuple(recs[i] for i in order.tolist())
    rank_of = {rec.id: i for i, rec in enumerate(ordered, 1)}
    return RankedCorpus(ordered, rank_of, reference_year)


def double_rank(ranked: RankedCorpus, local_ids: Iterable[str]) -> DoubleRankSeries:
    """Pair each local paper's rank within its group with its global rank."""
    return DoubleRankSeries.from_global_ranks(ranked.ranks_of(local_ids), ranked.n)


def _cutoff(x: float, n: int) -> int:
    if not 0 < x <= 100:
        raise ValueError(f"percentile must lie in (0, 100], got {x}")
    # x given as e.g. 10 or 0.5; exact integer arithmetic when x is integral
    if float(x).is_integer():
        return int(x) * n // 100
    return int(np.floor(x * n / 100))


def top_count(ranked: RankedCorpus, local_ids: Iterable[str], x: float) -> int:
    """Number of local papers whose global rank is within the top ``x`` percent."""
    ranks = ranked.ranks_of(local_ids)
    if x == 100:
        return len(ranks)
    k = _cutoff(x, ranked.n)
    return int(np.searchsorted(ranks, k, side="right"))


def top_counts(global_ranks: np.ndarray, n_global: int, percentiles=PERCENTILES) -> dict[int, int]:
    """Vectorised :func:`top_count` over several percentiles from sorted ranks."""
    ranks = np.sort(np.asarray(global_ranks))
    out = {}
    for x in percentiles:
        if x == 100:
            out[x] = len(ranks)
        else:
            out[x] = int(np.searchsorted(ranks, _cutoff(x, n_global), side="right"))
    return out


def percentile_profile(
    ranked: RankedCorpus, local_ids: Iterable[str], min_support: int = 10
) -> PercentileProfile:
    if min_support < 1:
        raise ValueError("min_support must be at least 1")
    ranks = ranked.ranks_of(local_ids)
    return PercentileProfile(len(ranks), top_counts(ranks, ranked.n), min_support)


def profile_from_ranks(global_ranks, n_global: int, min_support: int = 10) -> PercentileProfile:
    """Profile straight from a set of global ranks (used with synthetic subsamples)."""
    ranks = np.asarray(global_ranks)
    return PercentileProfile(len(ranks), top_counts(ranks, n_global), min_support)
