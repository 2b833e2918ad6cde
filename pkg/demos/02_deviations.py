"""Deviations from the ideal model and why one indicator can mislead.

Three synthetic groups share a world corpus with about 4% uncited papers:

* a journal-like group without uncited papers bends the double-rank plot
  downward;
* a zero-inflated group bends it upward;
* India-like (compressed) and Japan-like (wide, extra zeros) groups swap
  their order between the top-10% and bottom-50% segment slopes.

    python3 demos/02_deviations.py
"""
from pathlib import Path

from citelaw import report
from citelaw.distfit import log_histogram
from citelaw.indicators import classify_conformity, quartet
from citelaw.rankfit import classify_curvature, downscale_histogram, fit_power_law, segment_slopes
from citelaw.ranking import double_rank, percentile_profile, total_order
from citelaw.synth import scenario

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)


def group(corpus, label):
    return report.group_ids(corpus, label)


for name, label in (("journal_like", "JOURNAL"), ("zero_inflated", "ZEROS")):
    corpus = scenario(name, seed=3)
    ranked = total_order(corpus)
    series = double_rank(ranked, group(corpus, label))
    curv = classify_curvature(series)
    print(f"{name:14s} curvature {curv} (quadratic term {curv.quad_coeff:+.3f})")

corpus = scenario("india_japan", seed=3)
ranked = total_order(corpus)
series, slopes, fits = {}, {}, {}
for label in ("IN", "JP"):
    ids = group(corpus, label)
    series[label] = double_rank(ranked, ids)
    slopes[label] = segment_slopes(series[label])
    fits[label] = fit_power_law(series[label])
    prof = percentile_profile(ranked, ids)
    q = quartet(prof)
    print(f"{label}: slopes top10 {slopes[label][0]:.2f} bottom50 {slopes[label][1]:.2f}; "
          f"ratios {[round(r, 3) for r in prof.serial_ratios]} -> {classify_conformity(prof)}; "
          f"lower tail {q.lower_tail:.2f} vs mid {q.mid:.2f}")

verdict = report.compare_verdict("IN", slopes["IN"], "JP", slopes["JP"], 0.15)
print("verdict:", verdict.verdict, "(crossing)" if verdict.crossing else "")

report.doublerank_svg(series, fits, title="India-like vs Japan-like").save(OUT / "in_jp_doublerank.svg")
hists = {lab: log_histogram(report.group_citations(corpus, lab)) for lab in ("IN", "JP")}
world = log_histogram(corpus.citations)
overlay = {"world (scaled)": downscale_histogram(world, hists["JP"].total), **hists}
report.histogram_svg(overlay, title="citation distributions").save(OUT / "in_jp_hist.svg")
print("figures:", OUT / "in_jp_doublerank.svg", OUT / "in_jp_hist.svg")
