import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from citelaw.corpus import Corpus, PaperRecord, load_corpus  # noqa: E402
from citelaw.ranking import total_order  # noqa: E402
from citelaw.synth import scenario  # noqa: E402

DATA = Path(__file__).parent / "data"


def make_corpus(rows, window=(2014, 2017)) -> Corpus:
    """rows: (id, year, citations[, groups[, journal]])"""
    recs = []
    for row in rows:
        pid, year, c = row[:3]
        groups = frozenset(row[3]) if len(row) > 3 else frozenset()
        journal = row[4] if len(row) > 4 else None
        recs.append(PaperRecord(pid, year, c, journal=journal, groups=groups))
    return Corpus(tuple(recs), window, "")


@lru_cache(maxsize=12)
def cached_scenario(name: str, seed: int, n_global: int = 100_000, n_local: int = 2000):
    corpus = scenario(name, n_global=n_global, n_local=n_local, seed=seed)
    return corpus, total_order(corpus)


@pytest.fixture(scope="session")
def fixture_path() -> Path:
    return DATA / "fixture.jsonl"


@pytest.fixture(scope="session")
def fixture_corpus(fixture_path):
    return load_corpus(fixture_path)
