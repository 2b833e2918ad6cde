"""Command-line interface.

Exit codes: 0 success, 1 validation error, 2 I/O error, 3 insufficient data.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .corpus import Corpus, CorpusError, dump_corpus, load_corpus, select
from .distfit import fit_lognormal, ks_test, log_histogram, npp
from .errors import InsufficientDataError
from .indicators import mnc, quartet, uncited_share
from .ranking import PERCENTILES, double_rank, percentile_profile, top_counts, total_order
from .rankfit import (BOTTOM50, FULL, TOP10, classify_curvature, downscale_histogram,
                      fit_power_law)
from . import report
from .synth import SCENARIOS, SynthSpec, make_global_corpus, scenario

log = logging.getLogger("citelaw")

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_INSUFFICIENT = 0, 1, 2, 3
PLOT_COMMANDS = {"doublerank", "distfit", "compare"}


def _default_seed() -> int:
    return int(os.environ.get("CITELAW_SEED", "0"))


def _percentiles(text: str) -> tuple[float, ...]:
    vals = tuple(float(v) for v in text.split(",") if v.strip())
    if not vals or any(not 0 < v <= 100 for v in vals):
        raise argparse.ArgumentTypeError("percentiles must be in (0, 100]")
    return tuple(int(v) if v.is_integer() else v for v in vals)


def _emit(text: str) -> set[str]:
    vals = {v.strip() for v in text.split(",") if v.strip()}
    bad = vals - {"csv", "md", "svg"}
    if bad:
        raise argparse.ArgumentTypeError(f"unknown emit format(s): {', '.join(sorted(bad))}")
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="corpus file (JSONL or CSV)")
    common.add_argument("--format", choices=("jsonl", "csv"), help="input format (default: from suffix)")
    common.add_argument("--journals", help="journal metadata sidecar CSV (name,jif)")
    common.add_argument("--group-by", default="groups", choices=("groups", "journal", "topic"))
    common.add_argument("--filter", action="append", default=[], metavar="KEY=VALUE",
                        help="restrict the corpus: groups=, journal=, topic=, years=START-END")
    common.add_argument("--domestic", action="store_true",
                        help="keep only records carrying a single group label")
    common.add_argument("--reference-year", type=int, help="default: year after the publication window")
    common.add_argument("--percentiles", type=_percentiles, default=PERCENTILES)
    common.add_argument("--tolerance", type=float, default=0.15)
    common.add_argument("--min-support", type=int, default=10)
    common.add_argument("--curvature-threshold", type=float, default=0.02)
    common.add_argument("--seed", type=int, default=None, help="default: $CITELAW_SEED or 0")
    common.add_argument("--mc-runs", type=int, default=5000)
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--emit", type=_emit, default=None, help="comma list of csv, md, svg")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="citelaw", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("indicators", parents=[common], help="percentile indicator table per group")
    p = sub.add_parser("doublerank", parents=[common], help="double-rank series, fits and plot")
    p.add_argument("label")
    p = sub.add_parser("distfit", parents=[common], help="log histogram, NPP and KS test")
    p.add_argument("label", help="group label, or ALL for the whole corpus")
    p.add_argument("--shift", type=int, choices=(0, 1), default=None)
    p.add_argument("--method", choices=("lilliefors", "ks"), default="lilliefors")
    p = sub.add_parser("compare", parents=[common], help="overlay two groups")
    p.add_argument("label_a")
    p.add_argument("label_b")
    p = sub.add_parser("simulate", parents=[common], help="write a synthetic corpus")
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--mu", type=float, default=2.5)
    p.add_argument("--sigma", type=float, default=1.1)
    p.add_argument("--extra-zeros", type=float, default=0.0)
    p.add_argument("--discretization", choices=("round", "floor"), default="round")
    p.add_argument("--scenario", choices=sorted(SCENARIOS))
    p.add_argument("--n-local", type=int, default=2000, help="group size for --scenario")
    p.add_argument("--output", help="corpus path (default: OUT/corpus.jsonl)")
    sub.add_parser("report", parents=[common], help="markdown summary of every group")
    return parser


# helpers ------------------------------------------------------------------

def _load(args) -> Corpus:
    if not args.input:
        raise CorpusError("--input is required")
    corpus = load_corpus(args.input, args.format, journals_path=args.journals)
    crit: dict = {}
    for item in args.filter:
        key, sep, value = item.partition("=")
        if not sep:
            raise CorpusError(f"bad filter {item!r}; expected KEY=VALUE")
        if key == "groups":
            crit["groups"] = [v for v in value.split("|") if v]
        elif key in ("journal", "topic"):
            crit[key] = value
        elif key == "years":
            lo, _, hi = value.partition("-")
            crit["years"] = (int(lo), int(hi or lo))
        else:
            raise CorpusError(f"unknown filter key {key!r}")
    if crit or args.domestic:
        corpus = select(corpus, domestic=args.domestic, **crit)
    if not len(corpus):
        raise InsufficientDataError("corpus is empty after filtering")
    return corpus


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _emits(args) -> set[str]:
    if args.emit is None:
        return {"csv", "md", "svg"} if args.command in PLOT_COMMANDS else {"csv", "md"}
    if "svg" in args.emit and args.command not in PLOT_COMMANDS:
        raise CorpusError(f"--emit svg needs a plotting command ({', '.join(sorted(PLOT_COMMANDS))})")
    return args.emit


def _safe(label: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in label)


def _series(corpus, ranked, label, group_by):
    ids = report.group_ids(corpus, label, group_by)
    if len(ids) < 3:
        raise InsufficientDataError(f"group {label!r} has {len(ids)} papers; need at least 3")
    return double_rank(ranked, ids)


def _fits(series, threshold):
    fits = [("full", fit_power_law(series, FULL))]
    for scope, rng in (("top10", TOP10), ("bottom50", BOTTOM50)):
        try:
            fits.append((scope, fit_power_law(series, rng)))
        except InsufficientDataError:
            fits.append((scope, None))
    try:
        curv = classify_curvature(series, threshold)
    except InsufficientDataError:
        curv = None
    return fits, curv


# commands -----------------------------------------------------------------

def cmd_indicators(args) -> int:
    emits = _emits(args)
    corpus = _load(args)
    ranked = total_order(corpus, args.reference_year)
    rows = report.indicator_rows(corpus, ranked, args.group_by, args.min_support, args.tolerance)
    if not rows:
        raise InsufficientDataError(f"no {args.group_by} labels in the corpus")
    table = report.indicator_table(rows)
    quartets = [quartet(r.profile, args.tolerance) for r in rows]
    qtable = report.quartet_table([r.label for r in rows], quartets)
    counts = []
    for r in rows:
        ranks = ranked.ranks_of(report.group_ids(corpus, r.label, args.group_by))
        c = top_counts(ranks, ranked.n, args.percentiles)
        counts.append([r.label] + [c[x] for x in args.percentiles])
    count_cols = ["label"] + [f"top{x:g}" for x in args.percentiles]

    out = _outdir(args)
    if "csv" in emits:
        report.write_csv(out / "indicators.csv", report.INDICATOR_COLUMNS, table)
        report.write_csv(out / "quartets.csv", report.QUARTET_COLUMNS, qtable)
        report.write_csv(out / "top_counts.csv", count_cols, counts)
    if "md" in emits:
        header = ("label", "P", "P0 (%)", "MNC", "Ptop10%/P", "Ptop5%/Ptop50%",
                  "Ptop3%/Ptop30%", "Ptop1%/Ptop10%", "class")
        notes = [f"Global papers: {ranked.n}; blank ratios have fewer than "
                 f"{args.min_support} papers in the numerator percentile."]
        report.write_markdown(out / "indicators.md", "Percentile indicators", header, table, notes)
        report.write_markdown(out / "quartets.md", "Indicator quartet",
                              ("label", "P", "Ptop50%/P", "Ptop5%/Ptop10%", "Ptop1%/Ptop10%",
                               "lower tail ~ mid"), qtable)
    print(report.markdown_table(report.INDICATOR_COLUMNS, table), end="")
    return EXIT_OK


def cmd_doublerank(args) -> int:
    emits = _emits(args)
    corpus = _load(args)
    ranked = total_order(corpus, args.reference_year)
    series = _series(corpus, ranked, args.label, args.group_by)
    fits, curv = _fits(series, args.curvature_threshold)
    rows = report.fit_rows(fits)
    curv_row = ["curvature", str(curv) if curv else "", f"{curv.quad_coeff:.5f}" if curv else "",
                "", "", "", series.n_local]

    out = _outdir(args)
    stem = f"doublerank_{_safe(args.label)}"
    if "csv" in emits:
        report.write_csv(out / f"{stem}.csv", ("local_rank", "global_rank"), report.series_rows(series))
        report.write_csv(out / f"{stem}_fit.csv", report.FIT_COLUMNS, rows + [curv_row])
    if "md" in emits:
        report.write_markdown(out / f"{stem}_fit.md", f"Double-rank fit: {args.label}",
                              report.FIT_COLUMNS, rows + [curv_row])
    if "svg" in emits:
        chart = report.doublerank_svg({args.label: series}, {args.label: fits[0][1]},
                                      title=f"{args.label}: local vs global rank")
        chart.save(out / f"{stem}.svg")
    print(report.markdown_table(report.FIT_COLUMNS, rows + [curv_row]), end="")
    return EXIT_OK


def cmd_distfit(args) -> int:
    emits = _emits(args)
    corpus = _load(args)
    cites = report.group_citations(corpus, args.label, args.group_by)
    if cites.size < 5:
        raise InsufficientDataError(f"group {args.label!r} has {cites.size} papers; need at least 5")
    seed = _default_seed() if args.seed is None else args.seed
    hist = log_histogram(cites)
    fit = fit_lognormal(cites, args.shift)
    series = npp(cites, fit.shift)
    ks = ks_test(cites, fit.shift, args.mc_runs, seed, args.method)
    ks_table = report.ks_rows(fit, ks)

    out = _outdir(args)
    stem = f"distfit_{_safe(args.label)}"
    if "csv" in emits:
        report.write_csv(out / f"{stem}_hist.csv", ("lower", "upper", "freq"), report.histogram_rows(hist))
        report.write_csv(out / f"{stem}_npp.csv", ("i", "position", "z", "value"), report.npp_rows(series))
        report.write_csv(out / f"{stem}_ks.csv", report.KS_COLUMNS, ks_table)
    if "md" in emits:
        notes = [f"Uncited: {100 * uncited_share(cites):.1f}%; MNC: {mnc(cites):.1f}; "
                 f"Monte Carlo runs: {args.mc_runs}; seed: {seed}."]
        report.write_markdown(out / f"{stem}.md", f"Lognormal fit: {args.label}",
                              report.KS_COLUMNS, ks_table, notes)
    if "svg" in emits:
        report.histogram_svg({args.label: hist}, title=f"{args.label}: citation distribution").save(
            out / f"{stem}_hist.svg")
        report.npp_svg(series, fit, title=f"{args.label}: normal probability plot").save(
            out / f"{stem}_npp.svg")
    print(report.markdown_table(report.KS_COLUMNS, ks_table), end="")
    return EXIT_OK


def cmd_compare(args) -> int:
    emits = _emits(args)
    corpus = _load(args)
    ranked = total_order(corpus, args.reference_year)
    labels = (args.label_a, args.label_b)
    series = {lab: _series(corpus, ranked, lab, args.group_by) for lab in labels}
    fits = {lab: _fits(series[lab], args.curvature_threshold) for lab in labels}
    slopes = {}
    for lab in labels:
        f = dict(fits[lab][0])
        slopes[lab] = tuple(None if f[s] is None else f[s].alpha for s in ("top10", "bottom50"))
    verdict = report.compare_verdict(labels[0], slopes[labels[0]], labels[1], slopes[labels[1]],
                                     args.tolerance)

    hists = {lab: log_histogram(report.group_citations(corpus, lab, args.group_by)) for lab in labels}
    small = min(labels, key=lambda lab: (hists[lab].total, labels.index(lab)))
    big = labels[1] if small == labels[0] else labels[0]
    overlay = {lab: (hists[lab] if lab == small else downscale_histogram(hists[lab], hists[small].total))
               for lab in labels}
    quartets = [quartet(percentile_profile(ranked, report.group_ids(corpus, lab, args.group_by),
                                           args.min_support), args.tolerance) for lab in labels]
    qtable = report.quartet_table(list(labels), quartets)

    def _s(v):
        return "" if v is None else f"{v:.4f}"

    slope_rows = [[lab, _s(slopes[lab][0]), _s(slopes[lab][1]), _s(fits[lab][0][0][1].alpha),
                   str(fits[lab][1]) if fits[lab][1] else ""] for lab in labels]
    slope_cols = ("label", "slope_top10", "slope_bottom50", "alpha_full", "curvature")

    out = _outdir(args)
    stem = f"compare_{_safe(labels[0])}_{_safe(labels[1])}"
    if "csv" in emits:
        for lab in labels:
            report.write_csv(out / f"{stem}_{_safe(lab)}_series.csv", ("local_rank", "global_rank"),
                             report.series_rows(series[lab]))
            report.write_csv(out / f"{stem}_{_safe(lab)}_hist.csv", ("lower", "upper", "freq"),
                             report.histogram_rows(overlay[lab]))
        report.write_csv(out / f"{stem}_slopes.csv", slope_cols, slope_rows)
        report.write_csv(out / f"{stem}_quartets.csv", report.QUARTET_COLUMNS, qtable)
        report.write_csv(out / f"{stem}_verdict.csv", ("verdict", "crossing"),
                         [[verdict.verdict, "yes" if verdict.crossing else "no"]])
    text = (f"# Comparison: {labels[0]} vs {labels[1]}\n\n"
            + report.markdown_table(slope_cols, slope_rows) + "\n"
            + report.markdown_table(("label", "P", "Ptop50%/P", "Ptop5%/Ptop10%", "Ptop1%/Ptop10%",
                                     "lower tail ~ mid"), qtable)
            + f"\nVerdict: **{verdict.verdict}**"
            + (" (segment slopes rank the groups in opposite order)" if verdict.crossing else "")
            + f"\n\nHistogram of {big} scaled down to {hists[small].total} papers.\n")
    if "md" in emits:
        report.write_text(out / f"{stem}.md", text)
    if "svg" in emits:
        report.doublerank_svg(series, {lab: fits[lab][0][0][1] for lab in labels},
                              title=f"{labels[0]} vs {labels[1]}").save(out / f"{stem}_doublerank.svg")
        report.histogram_svg(overlay, title="citation distributions (scaled)").save(out / f"{stem}_hist.svg")
    print(text, end="")
    return EXIT_OK


def cmd_simulate(args) -> int:
    _emits(args)
    seed = _default_seed() if args.seed is None else args.seed
    if args.scenario:
        corpus = scenario(args.scenario, n_global=args.n, n_local=args.n_local, seed=seed)
    else:
        spec = SynthSpec(args.n, args.mu, args.sigma, args.extra_zeros, seed, args.discretization)
        corpus = make_global_corpus(spec)
    path = Path(args.output) if args.output else _outdir(args) / "corpus.jsonl"
    path.parent.mkdir(parents=True, exist_ok=True)
    dump_corpus(corpus, path, "jsonl")
    cites = corpus.citations
    print(f"wrote {path}: n={len(corpus)} zero_share={uncited_share(cites):.4f} MNC={mnc(cites):.2f}")
    return EXIT_OK


def cmd_report(args) -> int:
    _emits(args)
    corpus = _load(args)
    ranked = total_order(corpus, args.reference_year)
    cites = np.asarray(corpus.citations)
    rows = report.indicator_rows(corpus, ranked, args.group_by, args.min_support, args.tolerance)
    parts = [
        "# Citation distribution report\n\n",
        report.markdown_table(("papers", "MNC", "uncited (%)"),
                              [[len(corpus), f"{mnc(cites):.1f}", f"{100 * uncited_share(cites):.1f}"]]),
    ]
    if rows:
        parts += ["\n## Percentile indicators\n\n",
                  report.markdown_table(report.INDICATOR_COLUMNS, report.indicator_table(rows))]
        quartets = [quartet(r.profile, args.tolerance) for r in rows]
        parts += ["\n## Indicator quartet\n\n",
                  report.markdown_table(report.QUARTET_COLUMNS,
                                        report.quartet_table([r.label for r in rows], quartets))]
        fit_rows = []
        for r in rows:
            if r.P < 10:
                continue
            series = double_rank(ranked, report.group_ids(corpus, r.label, args.group_by))
            fits, curv = _fits(series, args.curvature_threshold)
            f = dict(fits)
            fit_rows.append([r.label, r.P] + [
                "" if f[s] is None else f"{f[s].alpha:.3f}" for s in ("full", "top10", "bottom50")
            ] + [str(curv) if curv else ""])
        parts += ["\n## Double-rank fits\n\n",
                  report.markdown_table(("label", "P", "alpha", "slope_top10", "slope_bottom50",
                                         "curvature"), fit_rows)]
    text = "".join(parts)
    if "md" in _emits(args):
        report.write_text(_outdir(args) / "report.md", text)
    print(text, end="")
    return EXIT_OK


COMMANDS = {
    "indicators": cmd_indicators,
    "doublerank": cmd_doublerank,
    "distfit": cmd_distfit,
    "compare": cmd_compare,
    "simulate": cmd_simulate,
    "report": cmd_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    logging.captureWarnings(True)
    try:
        return COMMANDS[args.command](args)
    except InsufficientDataError as exc:
        log.error("insufficient data: %s", exc)
        return EXIT_INSUFFICIENT
    except (CorpusError, ValueError, KeyError) as exc:
        log.error("validation error: %s", exc)
        return EXIT_VALIDATION
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
