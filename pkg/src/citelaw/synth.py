"""Seeded synthetic citation corpora.

Citation counts are discretised lognormal draws: a standard normal ``z`` is
obtained by inverting a SplitMix64 uniform, and the count is
``round(exp(mu + sigma * z))`` with halves rounded up, so continuous values
below 0.5 become uncited papers.  Extra zeros can be injected on top to mimic
populations with an excess of uncited work.

The named scenarios at the bottom are calibration tools, not empirical
claims: each produces a global corpus with one labelled group whose
double-rank plot has a known qualitative shape.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .corpus import Corpus, PaperRecord
from .distfit import standard_normal
from .prng import Prng
from .ranking import RankedCorpus, total_order

__all__ = [
    "SynthSpec",
    "GroupPlan",
    "sample_discrete_lognormal",
    "inject_zero_inflation",
    "sample_ideal_subsample",
    "make_global_corpus",
    "label_ranks",
    "SCENARIOS",
    "scenario",
]

DEFAULT_WINDOW = (2014, 2017)


@dataclass(frozen=True)
class SynthSpec:
    n: int
    mu: float
    sigma: float
    extra_zero_fraction: float = 0.0
    seed: int = 0
    discretization: str = "round"

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if not 0 <= self.extra_zero_fraction < 1:
            raise ValueError("extra_zero_fraction must lie in [0, 1)")
        if self.discretization not in ("round", "floor"):
            raise ValueError("discretization must be 'round' or 'floor'")


def inject_zero_inflation(citations: np.ndarray, fraction: float, prng: Prng) -> np.ndarray:
    """Force ``round(fraction * n)`` randomly chosen entries to zero."""
    out = np.array(citations, dtype=np.int64, copy=True)
    k = int(round(fraction * out.size))
    if k:
        out[prng.choice_without_replacement(out.size, k)] = 0
    return out


def sample_discrete_lognormal(spec: SynthSpec, prng: Prng | None = None) -> np.ndarray:
    prng = prng if prng is not None else Prng(spec.seed)
    z = standard_normal(prng, spec.n)
    with np.errstate(over="ignore"):
        x = np.exp(spec.mu + spec.sigma * z)
    x = np.minimum(x, 2.0 ** 62)
    if spec.discretization == "round":
        c = np.floor(x + 0.5)
    else:
        c = np.floor(x)
    c = c.astype(np.int64)
    if spec.extra_zero_fraction > 0:
        c = inject_zero_inflation(c, spec.extra_zero_fraction, prng)
    return c


def sample_ideal_subsample(
    n_global: int, n_local: int, alpha: float, seed: int | None = None
) -> np.ndarray:
    """Global ranks of a group that follows ``local = C * global**alpha`` exactly.

    Target ranks are ``round(n_global * (i / n_local) ** (1 / alpha))``;
    collisions are bumped to the next free rank.  With a ``seed``, every
    rank is then moved uniformly within half the gap to each neighbour,
    which keeps the sequence strictly increasing.
    """
    if not 1 <= n_local <= n_global:
        raise ValueError("need 1 <= n_local <= n_global")
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    i = np.arange(1, n_local + 1, dtype=float)
    g = np.floor(n_global * (i / n_local) ** (1.0 / alpha) + 0.5).astype(np.int64)
    g = np.maximum(g, 1)
    # bump collisions: g[k] >= g[k-1] + 1  <=>  g[k] - k is non-decreasing
    k = np.arange(n_local)
    g = np.maximum.accumulate(g - k) + k
    if g[-1] > n_global:
        raise ValueError(
            f"cannot place {n_local} ranks in {n_global} with alpha={alpha}: collisions overflow"
        )
    if seed is None:
        return g
    prev = np.concatenate(([0], g[:-1]))
    nxt = np.concatenate((g[1:], [n_global + 1]))
    down = (g - prev - 1) // 2
    up = (nxt - g - 1) // 2
    prng = Prng(seed)
    u = prng.uniform(n_local)
    shift = np.floor(u * (down + up + 1)).astype(np.int64) - down
    return g + shift


@dataclass(frozen=True)
class GroupPlan:
    """One block of records in a synthetic corpus.

    ``label=None`` leaves the block unlabelled (the rest of the world).
    Distribution fields left at ``None`` inherit from the corpus spec.
    ``min_citations`` lifts low counts, e.g. 1 for a group without uncited
    papers.
    """

    label: str | None
    size: int
    mu: float | None = None
    sigma: float | None = None
    extra_zero_fraction: float | None = None
    min_citations: int = 0


def make_global_corpus(
    spec: SynthSpec,
    plan: Sequence[GroupPlan] | None = None,
    pub_window: tuple[int, int] = DEFAULT_WINDOW,
) -> Corpus:
    """Assemble a corpus of ``spec.n`` records from the group ``plan``.

    Ids are ``S000001``, ``S000002``, ...; blocks are interleaved in a
    seeded random order and years are uniform over ``pub_window``.
    Each block draws from its own child stream of ``spec.seed``.
    """
    if plan is None:
        plan = [GroupPlan(None, spec.n)]
    if sum(p.size for p in plan) != spec.n:
        raise ValueError(f"plan sizes sum to {sum(p.size for p in plan)}, expected {spec.n}")
    root = Prng(spec.seed)
    width = max(6, len(str(spec.n)))
    years = root.integers(pub_window[0], pub_window[1] + 1, spec.n).tolist()
    cites, labels = [], []
    for b, block in enumerate(plan):
        sub = replace(
            spec,
            n=block.size,
            mu=spec.mu if block.mu is None else block.mu,
            sigma=spec.sigma if block.sigma is None else block.sigma,
            extra_zero_fraction=(spec.extra_zero_fraction if block.extra_zero_fraction is None
                                 else block.extra_zero_fraction),
        )
        c = sample_discrete_lognormal(sub, root.spawn(b + 1))
        if block.min_citations:
            c = np.maximum(c, block.min_citations)
        cites.append(c)
        groups = frozenset() if block.label is None else frozenset([block.label])
        labels.extend([groups] * block.size)
    cites = np.concatenate(cites).tolist() if cites else []
    # interleave blocks so ids carry no information about group membership
    perm = root.choice_without_replacement(spec.n, spec.n).tolist()
    records = [
        PaperRecord(f"S{j + 1:0{width}d}", years[j], cites[k], groups=labels[k])
        for j, k in enumerate(perm)
    ]
    return Corpus(tuple(records), pub_window, "synthetic")


def label_ranks(corpus: Corpus, ranked: RankedCorpus, ranks, label: str) -> Corpus:
    """Add ``label`` to the records holding the given global ranks."""
    ids = {ranked.records[int(r) - 1].id for r in ranks}
    return corpus.with_records(
        replace(rec, groups=rec.groups | {label}) if rec.id in ids else rec
        for rec in corpus.records
    )


# Background world: lognormal bulk with about 4% uncited papers.
WORLD_MU = 2.5
WORLD_SIGMA = 1.1
WORLD_EXTRA_ZEROS = 0.038


def _world_spec(n: int, seed: int) -> SynthSpec:
    return SynthSpec(n, WORLD_MU, WORLD_SIGMA, WORLD_EXTRA_ZEROS, seed)


def _two_block(label, n_global, n_local, seed, **group):
    spec = _world_spec(n_global, seed)
    plan = [GroupPlan(None, n_global - n_local), GroupPlan(label, n_local, **group)]
    return make_global_corpus(spec, plan)


def _ideal(n_global=100_000, n_local=2000, seed=0, alpha=0.8, label="IDEAL"):
    world = make_global_corpus(_world_spec(n_global, seed))
    ranks = sample_ideal_subsample(n_global, n_local, alpha, seed)
    return label_ranks(world, total_order(world), ranks, label)


def _journal_like(n_global=100_000, n_local=2000, seed=0, label="JOURNAL"):
    # shifted right, no uncited papers
    return _two_block(label, n_global, n_local, seed, mu=WORLD_MU + 1.0, sigma=0.9,
                      extra_zero_fraction=0.0, min_citations=1)


def _zero_inflated(n_global=100_000, n_local=2000, seed=0, label="ZEROS"):
    # excess of uncited and lowly cited papers, world-like top
    return _two_block(label, n_global, n_local, seed, mu=WORLD_MU - 0.3, sigma=1.2,
                      extra_zero_fraction=0.15)


# wide distribution: strong top and an excess of uncited papers
JAPAN_LIKE = dict(mu=WORLD_MU - 0.2, sigma=1.3, extra_zero_fraction=0.12)
# compressed distribution: few uncited papers, weak top
INDIA_LIKE = dict(mu=WORLD_MU + 0.1, sigma=0.75, extra_zero_fraction=0.0)


def _japan_like(n_global=100_000, n_local=2000, seed=0, label="JP"):
    return _two_block(label, n_global, n_local, seed, **JAPAN_LIKE)


def _india_like(n_global=100_000, n_local=2000, seed=0, label="IN"):
    return _two_block(label, n_global, n_local, seed, **INDIA_LIKE)


def _india_japan(n_global=100_000, n_local=2000, seed=0):
    """Both country-like groups (``IN``, ``JP``) in one world."""
    spec = _world_spec(n_global, seed)
    plan = [
        GroupPlan(None, n_global - 2 * n_local),
        GroupPlan("IN", n_local, **INDIA_LIKE),
        GroupPlan("JP", n_local, **JAPAN_LIKE),
    ]
    return make_global_corpus(spec, plan)


SCENARIOS = {
    "ideal": _ideal,
    "journal_like": _journal_like,
    "zero_inflated": _zero_inflated,
    "japan_like": _japan_like,
    "india_like": _india_like,
    "india_japan": _india_japan,
}


def scenario(name: str, **kwargs) -> Corpus:
    """Build a named calibration corpus (see ``SCENARIOS``)."""
    try:
        return SCENARIOS[name](**kwargs)
    except KeyError:
        raise ValueError(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}") from None


def expected_zero_share(mu: float, sigma: float, extra_zero_fraction: float = 0.0) -> float:
    """Analytic uncited share of a round-to-nearest discretised lognormal."""
    base = 0.5 * math.erfc(-((math.log(0.5) - mu) / sigma) / math.sqrt(2.0))
    return base + extra_zero_fraction * (1.0 - base)
