"""Tables, plot-data files and figures built from analysis results.

Number formats follow the usual layout of percentile-indicator tables:
ratios with three decimals, mean citations and uncited percentage with one,
and blank cells for ratios without enough support.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import Corpus
from .distfit import KsResult, LogHistogram, LognormalFit, NppSeries
from .indicators import IndicatorQuartet, IndicatorRow, indicator_row
from .ranking import PERCENTILES, DoubleRankSeries, RankedCorpus, _cutoff, percentile_profile
from .rankfit import PowerLawFit, ScaledHistogram
from .svg import PALETTE, Axis, Chart

INDICATOR_COLUMNS = ("label", "P", "P0_pct", "MNC", "r10_P", "r5_50", "r3_30", "r1_10", "class")
QUARTET_COLUMNS = ("label", "P", "top50_P", "top5_10", "top1_10", "tails_agree")
FIT_COLUMNS = ("scope", "alpha", "lnC", "r2", "range_lo", "range_hi", "n_points")


def fmt_ratio(v: float) -> str:
    return "" if v is None or math.isnan(v) else f"{v:.3f}"


def fmt1(v: float) -> str:
    return f"{v:.1f}"


def group_ids(corpus: Corpus, label: str, group_by: str = "groups") -> list[str]:
    """Ids of records in group ``label``; ``ALL`` selects the whole corpus."""
    if label == "ALL":
        return corpus.ids
    if group_by == "groups":
        return [r.id for r in corpus.records if label in r.groups]
    return [r.id for r in corpus.records if getattr(r, group_by) == label]


def group_citations(corpus: Corpus, label: str, group_by: str = "groups") -> np.ndarray:
    ids = set(group_ids(corpus, label, group_by))
    return np.array([r.citations for r in corpus.records if r.id in ids], dtype=np.int64)


def indicator_rows(
    corpus: Corpus,
    ranked: RankedCorpus,
    group_by: str = "groups",
    min_support: int = 10,
    tolerance: float = 0.15,
    labels: Sequence[str] | None = None,
) -> list[IndicatorRow]:
    """One row per group, ordered by size (descending) then label."""
    labels = sorted(corpus.labels(group_by)) if labels is None else list(labels)
    rows = []
    for label in labels:
        ids = group_ids(corpus, label, group_by)
        if not ids:
            continue
        cites = group_citations(corpus, label, group_by)
        prof = percentile_profile(ranked, ids, min_support)
        rows.append(indicator_row(label, cites, prof, tolerance))
    rows.sort(key=lambda r: (-r.P, r.label))
    return rows


def indicator_table(rows: Sequence[IndicatorRow]) -> list[list[str]]:
    out = []
    for row in rows:
        out.append(
            [row.label, str(row.P), fmt1(100 * row.p0), fmt1(row.mnc)]
            + [fmt_ratio(v) for v in row.profile.serial_ratios]
            + [str(row.conformity)]
        )
    return out


def quartet_table(labels: Sequence[str], quartets: Sequence[IndicatorQuartet]) -> list[list[str]]:
    out = []
    for label, q in zip(labels, quartets):
        agree = q.tails_agree
        out.append([label, str(q.size), fmt_ratio(q.lower_tail), fmt_ratio(q.mid),
                    fmt_ratio(q.upper_extreme), "" if agree is None else ("yes" if agree else "no")])
    return out


def write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def markdown_table(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(str(c) for c in row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def write_markdown(path: Path, title: str, header, rows, notes: Sequence[str] = ()) -> None:
    text = f"# {title}\n\n" + markdown_table(header, rows)
    if notes:
        text += "\n" + "\n".join(notes) + "\n"
    write_text(path, text)


def write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# double-rank ----------------------------------------------------------------

def series_rows(series: DoubleRankSeries):
    return [[int(a), int(b)] for a, b in zip(series.local_rank, series.global_rank)]


def fit_rows(fits: Sequence[tuple[str, PowerLawFit | None]]):
    rows = []
    for scope, fit in fits:
        if fit is None:
            rows.append([scope, "", "", "", "", "", 0])
        else:
            lo, hi = fit.rank_range
            rows.append([scope, f"{fit.alpha:.4f}", f"{fit.lnC:.4f}", f"{fit.r2:.4f}",
                         f"{lo:g}", f"{hi:g}", fit.n_points])
    return rows


def percentile_markers(series: DoubleRankSeries, percentiles=PERCENTILES):
    """(global cutoff, local count) for each top percentile with a nonzero count."""
    g = np.sort(series.global_rank)
    out = []
    for x in percentiles:
        k = series.n_global if x == 100 else _cutoff(x, series.n_global)
        c = int(np.searchsorted(g, k, side="right"))
        if k >= 1 and c >= 1:
            out.append((x, k, c))
    return out


def doublerank_svg(series_by_label: dict[str, DoubleRankSeries],
                   fits: dict[str, PowerLawFit | None], title: str = "") -> Chart:
    n_global = max(s.n_global for s in series_by_label.values())
    n_local = max(s.n_local for s in series_by_label.values())
    chart = Chart(Axis(1, n_global, log=True, label="global rank"),
                  Axis(1, max(n_local, 2), log=True, label="local rank"), title=title)
    for i, (label, s) in enumerate(series_by_label.items()):
        color = PALETTE[i % len(PALETTE)]
        chart.points(s.global_rank, s.local_rank, color=color, label=label)
        fit = fits.get(label)
        if fit is not None:
            gx = np.array([float(s.global_rank.min()), float(s.global_rank.max())])
            ly = np.exp(fit.lnC) * gx ** fit.alpha
            ly = np.clip(ly, 1, max(n_local, 2))
            chart.line(gx, ly, color=color, dash=True)
        marks = percentile_markers(s)
        chart.squares([m[1] for m in marks], [m[2] for m in marks])
    return chart


# distribution ---------------------------------------------------------------

def histogram_rows(hist: LogHistogram | ScaledHistogram):
    rows = []
    for lo, hi, f in zip(hist.lower.tolist(), hist.upper.tolist(), hist.freq.tolist()):
        rows.append([lo, hi, f if isinstance(f, int) else f"{f:.4f}"])
    return rows


def npp_rows(series: NppSeries):
    return [[i + 1, f"{p:.6f}", f"{z:.6f}", f"{v:.6f}"]
            for i, (p, z, v) in enumerate(zip(series.position, series.z, series.value))]


def ks_rows(fit: LognormalFit, ks: KsResult):
    return [[ks.n, fit.shift, f"{fit.mu:.4f}", f"{fit.sigma:.4f}", f"{ks.d:.4f}",
             f"{ks.p_value:.4f}", ks.band, ks.method]]


KS_COLUMNS = ("n", "shift", "mu", "sigma", "D", "p_value", "p_band", "method")


def histogram_svg(hists: dict[str, LogHistogram | ScaledHistogram], title: str = "") -> Chart:
    top = max(float(h.freq.max()) for h in hists.values())
    hi = max(int(h.upper[-1]) for h in hists.values())
    chart = Chart(Axis(1, hi + 2, log=True, label="citations + 1"),
                  Axis(0, top * 1.05, label="papers"), title=title)
    for i, (label, h) in enumerate(hists.items()):
        chart.bars(h.lower + 1, h.upper + 2, h.freq, color=PALETTE[i % len(PALETTE)], label=label)
    return chart


def npp_svg(series: NppSeries, fit: LognormalFit | None = None, title: str = "") -> Chart:
    v = series.value
    chart = Chart(Axis(float(series.z.min()) - 0.2, float(series.z.max()) + 0.2, label="normal quantile"),
                  Axis(float(v.min()) - 0.2, float(v.max()) + 0.2,
                       label=f"ln(citations + {series.shift})" if series.shift else "ln(citations)"),
                  title=title)
    chart.points(series.z, v)
    if fit is not None:
        zz = np.array([series.z.min(), series.z.max()])
        chart.line(zz, fit.mu + fit.sigma * zz, dash=True)
    return chart


@dataclass(frozen=True)
class Comparison:
    labels: tuple[str, str]
    slopes: tuple[tuple[float | None, float | None], tuple[float | None, float | None]]
    verdict: str
    crossing: bool


def compare_verdict(label_a: str, slopes_a, label_b: str, slopes_b, tolerance: float) -> Comparison:
    """Decide whether one scalar indicator can rank the two groups.

    The top-10% and bottom-50% slope ratios between the groups must agree
    within ``tolerance`` (relative spread).  ``crossing`` flags divergent
    segments that rank the groups in opposite order.
    """
    (ta, ba), (tb, bb) = slopes_a, slopes_b
    if None in (ta, ba, tb, bb):
        return Comparison((label_a, label_b), (slopes_a, slopes_b), "insufficient-data", False)
    r_top, r_bot = ta / tb, ba / bb
    agree = abs(r_top - r_bot) / ((r_top + r_bot) / 2) < tolerance
    verdict = "comparable-by-single-indicator" if agree else "divergent-segments"
    # opposite orderings within tolerance are noise, not a reversal
    crossing = not agree and (ta - tb) * (ba - bb) < 0
    return Comparison((label_a, label_b), (slopes_a, slopes_b), verdict, crossing)
