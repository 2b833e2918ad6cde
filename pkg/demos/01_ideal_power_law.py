"""Ideal double-rank power law: equal serial percentile ratios.

A group whose local ranks follow local = C * global**alpha inside a world
corpus has P_top x% = P * (x/100)**alpha, so every serial ratio equals
0.1**alpha.  This script builds such a group and checks the identity.

    python3 demos/01_ideal_power_law.py
"""
from pathlib import Path

from citelaw import report
from citelaw.indicators import classify_conformity, quartet
from citelaw.rankfit import classify_curvature, fit_power_law, segment_slopes
from citelaw.ranking import double_rank, percentile_profile, total_order
from citelaw.synth import SynthSpec, label_ranks, make_global_corpus, sample_ideal_subsample

OUT = Path(__file__).parent / "out"
N_GLOBAL, N_LOCAL, ALPHA = 100_000, 2000, 0.8

world = make_global_corpus(SynthSpec(N_GLOBAL, 2.5, 1.1, 0.038, seed=1))
ranked = total_order(world)
corpus = label_ranks(world, ranked, sample_ideal_subsample(N_GLOBAL, N_LOCAL, ALPHA, seed=1), "IDEAL")

ids = [r.id for r in corpus.records if "IDEAL" in r.groups]
prof = percentile_profile(ranked, ids)
print(f"expected ratio 0.1**{ALPHA} = {0.1 ** ALPHA:.4f}")
for name, value in prof.ratios.items():
    print(f"  {name:6s} {value:.4f}")
print("conformity:", classify_conformity(prof))

q = quartet(prof)
print(f"quartet: P={q.size} lower tail={q.lower_tail:.3f} mid={q.mid:.3f} "
      f"(both ~ 0.5**{ALPHA} = {0.5 ** ALPHA:.3f})")

series = double_rank(ranked, ids)
fit = fit_power_law(series)
top, bottom = segment_slopes(series)
print(f"double-rank slope {fit.alpha:.3f} (r2 {fit.r2:.4f}); top 10% {top:.3f}, bottom 50% {bottom:.3f}; "
      f"curvature {classify_curvature(series)}")

OUT.mkdir(exist_ok=True)
report.doublerank_svg({"IDEAL": series}, {"IDEAL": fit}, title="ideal subsample").save(OUT / "ideal_doublerank.svg")
print("figure:", OUT / "ideal_doublerank.svg")
