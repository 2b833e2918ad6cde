"""Acceptance criteria 1-11, one check per criterion.

Each check prints a single ``[criterion N] PASS|FAIL ...`` line.  Run with
``pytest tests/test_acceptance.py -v`` or directly as a script.
"""
from __future__ import annotations

import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

from citelaw.cli import main as cli_main  # noqa: E402
from citelaw.distfit import inv_normal_cdf, ks_statistic, ks_test, npp  # noqa: E402
from citelaw.indicators import classify_conformity, pearson  # noqa: E402
from citelaw.rankfit import Curvature, classify_curvature, fit_power_law, segment_slopes  # noqa: E402
from citelaw.ranking import (DoubleRankSeries, double_rank, percentile_profile, profile_from_ranks,  # noqa: E402
                             top_count, total_order)
from citelaw.synth import (SynthSpec, make_global_corpus, sample_discrete_lognormal,  # noqa: E402
                           sample_ideal_subsample, scenario)
from conftest import make_corpus  # noqa: E402
from oracles import bisect_quantile, brute_ks_d, brute_rank, brute_top_count, two_pass_pearson  # noqa: E402

SEEDS = range(20)


def report(n: int, ok: bool, detail: str) -> None:
    print(f"[criterion {n}] {'PASS' if ok else 'FAIL'} {detail}", flush=True)


def group_series(corpus, ranked, label):
    return double_rank(ranked, [r.id for r in corpus.records if label in r.groups])


def check_1():
    corpus = make_global_corpus(SynthSpec(10_000, 2.5, 1.1, 0.038, seed=1))
    t0 = time.perf_counter()
    ranked = total_order(corpus)
    prof = percentile_profile(ranked, corpus.ids)
    elapsed = time.perf_counter() - t0
    dev = max(abs(r - 0.1) for r in prof.serial_ratios)
    ok = dev <= 2 / 10_000 and elapsed < 1.0
    return ok, f"max |r - 0.1| = {dev:.2e} (limit 2e-4), runtime {elapsed:.3f} s"


def check_2():
    n_g, n_l, a = 100_000, 2000, 0.8
    target = 0.1 ** a
    ideal, ratios, alphas = 0, [], []
    for seed in SEEDS:
        g = sample_ideal_subsample(n_g, n_l, a, seed)
        prof = profile_from_ranks(g, n_g)
        ideal += str(classify_conformity(prof, 0.15)) == "ideal"
        ratios.append(prof.serial_ratios)
        alphas.append(fit_power_law(DoubleRankSeries.from_global_ranks(g, n_g)).alpha)
    mean = np.mean(ratios, axis=0)
    ok = (ideal >= 19 and np.all(np.abs(mean - target) <= 0.01)
          and all(abs(x - a) <= 0.05 for x in alphas))
    return ok, (f"ideal in {ideal}/20 runs; mean ratios {np.round(mean, 4).tolist()} vs {target:.4f}; "
                f"slopes in [{min(alphas):.4f}, {max(alphas):.4f}]")


def check_3():
    pos = npp([5, 1, 9, 2, 14, 3, 30, 7, 4, 11]).position
    expect = [0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95]
    ok = pos.tolist() == expect
    return ok, f"positions {pos.tolist()}"


def check_4():
    t0 = time.perf_counter()
    rejections, worst = 0, 0.0
    rng = np.random.default_rng(404)
    for seed in range(200):
        x = rng.normal(rng.uniform(-2, 4), rng.uniform(0.3, 2.0), size=100)
        r = ks_test(x, log_values=True, mc_runs=1000, seed=seed)
        rejections += r.p_value < 0.05
        if seed % 10 == 0:
            n = int(rng.integers(5, 101))
            y = x[:n]
            worst = max(worst, abs(ks_statistic(y, y.mean(), y.std(ddof=1))
                                   - brute_ks_d(y.tolist(), y.mean(), y.std(ddof=1))))
    elapsed = time.perf_counter() - t0
    rate = rejections / 200
    ok = 0.02 <= rate <= 0.09 and worst < 1e-12 and elapsed < 60
    return ok, f"rejection rate {rate:.3f} (band [0.02, 0.09]); max |D - oracle| {worst:.1e}; {elapsed:.1f} s"


def check_5():
    half = sample_discrete_lognormal(SynthSpec(100_000, math.log(0.5), 1.0, seed=5))
    z_half = float(np.mean(half == 0))
    low = sample_discrete_lognormal(SynthSpec(100_000, 3.0, 1.2, seed=5))
    z_low = float(np.mean(low == 0))
    ok = abs(z_half - 0.5) <= 0.015 and z_low < 0.01
    return ok, f"zero share {z_half:.4f} at mu=ln 0.5 (target 0.5 +- 0.015); {z_low:.4f} at mu=3 (< 0.01)"


def check_6():
    rng = np.random.default_rng(606)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(3, 500))
        x = rng.normal(size=n) * 10 ** rng.uniform(-3, 3)
        y = rng.normal(size=n) + rng.uniform(-1, 1) * x / x.std()
        worst = max(worst, abs(pearson(x, y) - two_pass_pearson(x.tolist(), y.tolist())))
    exact = True
    for _ in range(100):
        x = rng.normal(size=int(rng.integers(3, 300))) * rng.uniform(0.01, 100)
        a, b = rng.uniform(0.1, 10) * rng.choice([-1, 1]), rng.uniform(-100, 100)
        exact &= pearson(x, a * x + b) == np.sign(a)
    ok = worst <= 1e-12 and exact
    return ok, f"max |r - oracle| {worst:.1e}; collinear inputs give exactly +-1: {exact}"


def check_7():
    rng = np.random.default_rng(707)
    mismatches = 0
    for _ in range(50):
        n = int(rng.integers(1, 501))
        rows = [(f"r{i:04d}", int(rng.integers(2014, 2018)), int(rng.negative_binomial(1, 0.1)))
                for i in range(n)]
        ranked = total_order(make_corpus(rows))
        order = brute_rank(rows, ranked.reference_year)
        assert order == [r.id for r in ranked.records]
        local = {rows[i][0] for i in rng.choice(n, int(rng.integers(1, n + 1)), replace=False)}
        for x in (1, 3, 5, 10, 30, 50):
            mismatches += top_count(ranked, local, x) != brute_top_count(order, local, x)
    return mismatches == 0, f"{mismatches} mismatches over 50 corpora x 6 percentiles"


def check_8():
    expect = {"journal_like": ("JOURNAL", Curvature.DOWNWARD),
              "zero_inflated": ("ZEROS", Curvature.UPWARD),
              "ideal": ("IDEAL", Curvature.NONE)}
    hits = {}
    for name, (label, want) in expect.items():
        hits[name] = 0
        for seed in SEEDS:
            corpus = scenario(name, seed=seed)
            got = classify_curvature(group_series(corpus, total_order(corpus), label)).label
            hits[name] += got is want
    ok = all(h >= 18 for h in hits.values())
    return ok, "correct runs: " + ", ".join(f"{k} {v}/20" for k, v in hits.items())


def check_9():
    crossings = 0
    for seed in SEEDS:
        corpus = scenario("india_japan", seed=seed)
        ranked = total_order(corpus)
        ti, bi = segment_slopes(group_series(corpus, ranked, "IN"))
        tj, bj = segment_slopes(group_series(corpus, ranked, "JP"))
        crossings += (ti - tj) * (bi - bj) < 0
    return crossings >= 18, f"segment-slope ordering reversed in {crossings}/20 runs"


def check_10(tmp: Path):
    fixture = HERE / "data" / "fixture.jsonl"
    golden = HERE / "data" / "golden"
    outs = []
    for k in range(2):
        out = tmp / f"run{k}"
        assert cli_main(["indicators", "--input", str(fixture), "--out", str(out)]) == 0
        outs.append(out)
    names = ("indicators.csv", "indicators.md")
    same = all((outs[0] / n).read_bytes() == (outs[1] / n).read_bytes() == (golden / n).read_bytes()
               for n in names)
    header = (outs[0] / "indicators.csv").read_text().splitlines()[0]
    blank = any(line.split(",")[7] == "" for line in (outs[0] / "indicators.csv").read_text().splitlines()[1:])
    ok = same and header == "label,P,P0_pct,MNC,r10_P,r5_50,r3_30,r1_10,class" and blank
    return ok, f"byte-identical to golden: {same}; header {header!r}; blank unsupported cells: {blank}"


def check_11():
    half = np.geomspace(1e-12, 0.5, 500)
    grid = np.concatenate([half, 1.0 - half])
    worst = 0.0
    for p in grid:
        worst = max(worst, abs(inv_normal_cdf(float(p)) - bisect_quantile(float(p))))
    return worst <= 1e-9, f"max |error| {worst:.2e} over {grid.size} grid points (limit 1e-9)"


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9, check_10, check_11]


@pytest.mark.parametrize("n", range(1, 12), ids=[f"criterion_{n}" for n in range(1, 12)])
def test_acceptance(n, capsys, tmp_path):
    check = CHECKS[n - 1]
    ok, detail = check(tmp_path) if n == 10 else check()
    with capsys.disabled():
        print()
        report(n, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    import tempfile

    failed = 0
    with tempfile.TemporaryDirectory() as tmp:
        for n, check in enumerate(CHECKS, 1):
            ok, detail = check(Path(tmp)) if n == 10 else check()
            report(n, ok, detail)
            failed += not ok
    sys.exit(1 if failed else 0)
