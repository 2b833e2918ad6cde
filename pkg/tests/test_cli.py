import csv
import math
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from citelaw.cli import main
from citelaw.corpus import dump_corpus, load_corpus
from citelaw.ranking import total_order
from citelaw.synth import SynthSpec, label_ranks, make_global_corpus, sample_ideal_subsample

GOLDEN = Path(__file__).parent / "data" / "golden"


def run(*argv):
    return main([str(a) for a in argv])


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


@pytest.fixture(scope="module")
def sim_dir(tmp_path_factory):
    """Synthetic corpora written once through the simulate command."""
    d = tmp_path_factory.mktemp("sim")
    for name in ("ideal", "zero_inflated"):
        assert run("simulate", "--scenario", name, "--n", 100_000, "--seed", 1,
                   "--output", d / f"{name}.jsonl") == 0
    return d


def test_indicators_golden(tmp_path, fixture_path):
    assert run("indicators", "--input", fixture_path, "--out", tmp_path) == 0
    for name in ("indicators.csv", "indicators.md", "quartets.csv"):
        assert (tmp_path / name).read_bytes() == (GOLDEN / name).read_bytes(), name
    rows = read_csv(tmp_path / "indicators.csv")
    assert rows[0] == "label,P,P0_pct,MNC,r10_P,r5_50,r3_30,r1_10,class".split(",")
    # groups with too few top-1% papers leave the cell blank
    assert all(r[7] == "" for r in rows[1:])


def test_indicators_two_groups_and_repeatability(tmp_path):
    corpus = make_global_corpus(SynthSpec(4000, 2.5, 1.1, seed=3))
    ranked = total_order(corpus)
    corpus = label_ranks(corpus, ranked, range(1, 4001, 2), "ODD")
    corpus = label_ranks(corpus, ranked, range(2, 4001, 2), "EVEN")
    src = tmp_path / "two.jsonl"
    dump_corpus(corpus, src)
    assert run("indicators", "--input", src, "--out", tmp_path / "a") == 0
    assert run("indicators", "--input", src, "--out", tmp_path / "b") == 0
    rows = read_csv(tmp_path / "a" / "indicators.csv")
    assert [r[0] for r in rows[1:]] == ["EVEN", "ODD"]
    for name in ("indicators.csv", "indicators.md", "quartets.csv", "top_counts.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_csv_reingest_gives_same_analysis(tmp_path, fixture_path, fixture_corpus):
    as_csv = tmp_path / "fixture.csv"
    dump_corpus(fixture_corpus, as_csv)
    run("indicators", "--input", fixture_path, "--out", tmp_path / "j")
    run("indicators", "--input", as_csv, "--out", tmp_path / "c")
    assert (tmp_path / "j" / "indicators.csv").read_bytes() == (tmp_path / "c" / "indicators.csv").read_bytes()


def test_filters_and_group_by(tmp_path, fixture_path):
    assert run("indicators", "--input", fixture_path, "--group-by", "journal", "--out", tmp_path) == 0
    assert [r[0] for r in read_csv(tmp_path / "indicators.csv")[1:]] == ["J1", "J2", "J3"]
    assert run("indicators", "--input", fixture_path, "--filter", "topic=T1", "--filter", "years=2015-2016",
               "--domestic", "--out", tmp_path / "f") == 0
    assert run("indicators", "--input", fixture_path, "--percentiles", "2.5,10", "--out", tmp_path / "p") == 0
    assert read_csv(tmp_path / "p" / "top_counts.csv")[0] == ["label", "top2.5", "top10"]


def test_doublerank_identity(tmp_path, fixture_path):
    assert run("doublerank", "ALL", "--input", fixture_path, "--out", tmp_path) == 0
    fit = {r[0]: r for r in read_csv(tmp_path / "doublerank_ALL_fit.csv")[1:]}
    assert fit["full"][1] == "1.0000" and fit["curvature"][1] == "none"
    svg = ET.parse(tmp_path / "doublerank_ALL.svg").getroot()
    rects = [e for e in svg.iter("{http://www.w3.org/2000/svg}rect") if e.get("width") == "7.0"]
    assert len(rects) == 7
    assert "href" not in (tmp_path / "doublerank_ALL.svg").read_text()
    series = read_csv(tmp_path / "doublerank_ALL.csv")
    assert series[0] == ["local_rank", "global_rank"] and series[1] == ["1", "1"]


def test_doublerank_scenarios(tmp_path, sim_dir):
    assert run("doublerank", "IDEAL", "--input", sim_dir / "ideal.jsonl", "--out", tmp_path) == 0
    fit = {r[0]: r for r in read_csv(tmp_path / "doublerank_IDEAL_fit.csv")[1:]}
    assert abs(float(fit["full"][1]) - 0.8) < 0.03 and fit["curvature"][1] == "none"
    assert run("doublerank", "ZEROS", "--input", sim_dir / "zero_inflated.jsonl", "--out", tmp_path) == 0
    fit = {r[0]: r for r in read_csv(tmp_path / "doublerank_ZEROS_fit.csv")[1:]}
    assert fit["curvature"][1] == "upward"


def test_distfit_outputs(tmp_path, fixture_path):
    assert run("distfit", "BB", "--input", fixture_path, "--mc-runs", 1000, "--seed", 3, "--out", tmp_path) == 0
    hist = read_csv(tmp_path / "distfit_BB_hist.csv")
    assert hist[0] == ["lower", "upper", "freq"] and hist[1][:2] == ["0", "0"]
    assert sum(int(r[2]) for r in hist[1:]) == 579
    npp = read_csv(tmp_path / "distfit_BB_npp.csv")
    assert len(npp) == 580 and float(npp[1][1]) == pytest.approx(0.5 / 579, abs=1e-6)
    ks = dict(zip(*read_csv(tmp_path / "distfit_BB_ks.csv")))
    assert ks["p_band"] == "< 0.01" and ks["method"] == "lilliefors"
    for name in ("distfit_BB_hist.svg", "distfit_BB_npp.svg"):
        ET.parse(tmp_path / name)


def test_seed_env_var(tmp_path, fixture_path, monkeypatch):
    args = ("distfit", "AA", "--input", fixture_path, "--mc-runs", 1000, "--emit", "csv")
    run(*args, "--seed", 5, "--out", tmp_path / "flag")
    monkeypatch.setenv("CITELAW_SEED", "5")
    run(*args, "--out", tmp_path / "env")
    # an explicit flag still wins over the environment
    run(*args, "--seed", 6, "--out", tmp_path / "other")
    a = (tmp_path / "flag" / "distfit_AA_ks.csv").read_bytes()
    assert a == (tmp_path / "env" / "distfit_AA_ks.csv").read_bytes()
    assert not (tmp_path / "other" / "distfit_AA.md").exists()


def test_compare_self_is_comparable(tmp_path, fixture_path, capsys):
    assert run("compare", "AA", "AA", "--input", fixture_path, "--out", tmp_path) == 0
    out = capsys.readouterr().out
    assert "comparable-by-single-indicator" in out
    assert read_csv(tmp_path / "compare_AA_AA_verdict.csv")[1] == ["comparable-by-single-indicator", "no"]


def test_compare_two_ideal_groups(tmp_path):
    world = make_global_corpus(SynthSpec(100_000, 2.5, 1.1, 0.038, seed=2))
    ranked = total_order(world)
    c = label_ranks(world, ranked, sample_ideal_subsample(100_000, 2000, 0.8, 21), "A")
    c = label_ranks(c, ranked, sample_ideal_subsample(100_000, 1500, 0.8, 22), "B")
    src = tmp_path / "ab.jsonl"
    dump_corpus(c, src)
    assert run("compare", "A", "B", "--input", src, "--out", tmp_path, "--emit", "csv") == 0
    assert read_csv(tmp_path / "compare_A_B_verdict.csv")[1][0] == "comparable-by-single-indicator"
    hist = read_csv(tmp_path / "compare_A_B_A_hist.csv")
    assert sum(float(r[2]) for r in hist[1:]) == pytest.approx(1500)


def test_compare_india_japan_diverge(tmp_path):
    src = tmp_path / "injp.jsonl"
    assert run("simulate", "--scenario", "india_japan", "--n", 100_000, "--seed", 4, "--output", src) == 0
    assert run("compare", "IN", "JP", "--input", src, "--out", tmp_path, "--emit", "csv,md") == 0
    verdict = read_csv(tmp_path / "compare_IN_JP_verdict.csv")[1]
    assert verdict == ["divergent-segments", "yes"]


def test_simulate(tmp_path, capsys):
    assert run("simulate", "--n", 1000, "--seed", 7, "--output", tmp_path / "a.jsonl") == 0
    assert run("simulate", "--n", 1000, "--seed", 7, "--output", tmp_path / "b.jsonl") == 0
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()
    capsys.readouterr()
    run("simulate", "--n", 1000, "--extra-zeros", 0.1, "--output", tmp_path / "z.jsonl")
    out = capsys.readouterr().out
    share = float(out.split("zero_share=")[1].split()[0])
    assert share >= 0.1
    run("simulate", "--n", 100_000, "--mu", math.log(0.5), "--sigma", 1, "--output", tmp_path / "h.jsonl")
    share = float(capsys.readouterr().out.split("zero_share=")[1].split()[0])
    assert abs(share - 0.5) < 0.015


def test_report(tmp_path, fixture_path):
    assert run("report", "--input", fixture_path, "--out", tmp_path) == 0
    text = (tmp_path / "report.md").read_text()
    assert "## Percentile indicators" in text and "## Double-rank fits" in text


@pytest.mark.parametrize("argv,code", [
    (("indicators", "--input", "/nonexistent/x.jsonl"), 2),
    (("indicators",), 1),
    (("indicators", "--emit", "svg"), 1),
    (("indicators", "--filter", "colour=red"), 1),
    (("indicators", "--filter", "journal=Nope"), 3),
    (("doublerank", "NOPE"), 3),
    (("distfit", "NOPE"), 3),
    (("indicators", "--reference-year", "2010"), 1),
])
def test_exit_codes(tmp_path, fixture_path, argv, code):
    argv = list(argv)
    if "--input" not in argv and argv != ["indicators"]:
        argv += ["--input", str(fixture_path)]
    assert run(*argv, "--out", tmp_path) == code


def test_exit_codes_bad_files(tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "a", "year": 2015, "citations": -3}\n')
    assert run("indicators", "--input", bad, "--out", tmp_path) == 1
    flat = tmp_path / "flat.jsonl"
    flat.write_text("".join(f'{{"id": "p{i}", "year": 2015, "citations": 4, "groups": ["G"]}}\n'
                            for i in range(10)))
    assert run("distfit", "G", "--input", flat, "--out", tmp_path) == 3
