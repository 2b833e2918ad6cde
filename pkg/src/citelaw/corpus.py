"""Publication records, corpora, file ingestion and sub-corpus selection.

Two on-disk formats are supported.

JSONL
    One JSON object per line.  Paper rows carry ``id``, ``year``,
    ``citations`` and optionally ``journal``, ``groups`` (list of labels) and
    ``topic``.  Two optional control rows are recognised by a ``kind`` key::

        {"kind": "corpus", "pub_window": [2014, 2017], "citation_window": "2019-2022"}
        {"kind": "journal", "name": "Nano Letters", "jif": 12.3}

    Any other key on a paper row is kept in ``PaperRecord.extra``.

CSV
    Header ``id,year,citations,journal,groups,topic``; ``groups`` is
    ``|``-separated.  Journal metadata comes from a sidecar CSV with header
    ``name,jif``.
"""
from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping

__all__ = [
    "CorpusError",
    "ZeroMatchWarning",
    "PaperRecord",
    "JournalMeta",
    "Corpus",
    "load_corpus",
    "load_journals",
    "dump_corpus",
    "select",
]

CSV_COLUMNS = ("id", "year", "citations", "journal", "groups", "topic")
_KNOWN_KEYS = {"id", "year", "citations", "journal", "groups", "topic", "kind"}


class CorpusError(ValueError):
    """Raised for malformed or invalid corpus input."""

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class ZeroMatchWarning(UserWarning):
    """A selection criterion matched no record."""


@dataclass(frozen=True)
class PaperRecord:
    id: str
    year: int
    citations: int
    journal: str | None = None
    groups: frozenset[str] = frozenset()
    topic: str | None = None
    extra: Mapping[str, object] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.citations < 0:
            raise CorpusError(f"negative citations ({self.citations}) for {self.id!r}")
        if not isinstance(self.groups, frozenset):
            object.__setattr__(self, "groups", frozenset(self.groups))

    def to_json(self) -> dict:
        row = {
            "id": self.id,
            "year": self.year,
            "citations": self.citations,
            "journal": self.journal,
            "groups": sorted(self.groups),
            "topic": self.topic,
        }
        row.update(self.extra)
        return row


@dataclass(frozen=True)
class JournalMeta:
    name: str
    jif: float | None = None

    def __post_init__(self):
        if self.jif is not None and self.jif < 0:
            raise CorpusError(f"negative JIF for journal {self.name!r}")


@dataclass(frozen=True, eq=False)
class Corpus:
    """An immutable, validated collection of papers.

    ``pub_window`` is inclusive on both ends.  Record order is the input
    order; ranking never mutates it.
    """

    records: tuple[PaperRecord, ...]
    pub_window: tuple[int, int]
    citation_window_note: str = ""
    journals: Mapping[str, JournalMeta] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        start, end = self.pub_window
        if start > end:
            raise CorpusError(f"publication window {self.pub_window} is reversed")
        seen: set[str] = set()
        for i, rec in enumerate(self.records, 1):
            if rec.id in seen:
                raise CorpusError(f"duplicate id {rec.id!r}", row=i)
            seen.add(rec.id)
            if not start <= rec.year <= end:
                raise CorpusError(
                    f"year {rec.year} of {rec.id!r} outside window {start}-{end}", row=i
                )

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        return (
            self.records == other.records
            and tuple(self.pub_window) == tuple(other.pub_window)
            and self.citation_window_note == other.citation_window_note
            and dict(self.journals) == dict(other.journals)
        )

    @property
    def ids(self) -> list[str]:
        return [r.id for r in self.records]

    @property
    def citations(self) -> list[int]:
        return [r.citations for r in self.records]

    def labels(self, key: str = "groups") -> set[str]:
        """Vocabulary of group labels, journals or topics present."""
        out: set[str] = set()
        for rec in self.records:
            if key == "groups":
                out |= rec.groups
            else:
                value = getattr(rec, key)
                if value is not None:
                    out.add(value)
        return out

    def with_records(self, records: Iterable[PaperRecord]) -> "Corpus":
        return replace(self, records=tuple(records))


def _parse_int(value, name: str, row: int) -> int:
    if isinstance(value, bool):
        raise CorpusError(f"{name} must be an integer, got {value!r}", row=row)
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            pass
    raise CorpusError(f"{name} must be an integer, got {value!r}", row=row)


def _record_from_mapping(row: Mapping[str, object], rownum: int) -> PaperRecord:
    for key in ("id", "year", "citations"):
        if row.get(key) in (None, ""):
            raise CorpusError(f"missing required field {key!r}", row=rownum)
    citations = _parse_int(row["citations"], "citations", rownum)
    if citations < 0:
        raise CorpusError(f"negative citations ({citations})", row=rownum)
    groups = row.get("groups") or ()
    if isinstance(groups, str):
        groups = [g for g in groups.split("|") if g]
    extra = {k: v for k, v in row.items() if k not in _KNOWN_KEYS}
    return PaperRecord(
        id=str(row["id"]),
        year=_parse_int(row["year"], "year", rownum),
        citations=citations,
        journal=row.get("journal") or None,
        groups=frozenset(str(g) for g in groups),
        topic=row.get("topic") or None,
        extra=extra,
    )


def load_journals(path: str | Path) -> dict[str, JournalMeta]:
    """Read a ``name,jif`` sidecar CSV."""
    journals = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for i, row in enumerate(csv.DictReader(fh), 2):
            name = (row.get("name") or "").strip()
            if not name:
                raise CorpusError("journal row without name", row=i)
            jif = row.get("jif")
            try:
                jif = float(jif) if jif not in (None, "") else None
            except ValueError:
                raise CorpusError(f"bad JIF {jif!r}", row=i) from None
            journals[name] = JournalMeta(name, jif)
    return journals


def _read_jsonl(path: Path):
    records, journals, meta = [], {}, {}
    with open(path, encoding="utf-8") as fh:
        for i, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"malformed JSON ({exc.msg})", row=i) from None
            if not isinstance(row, dict):
                raise CorpusError("expected a JSON object", row=i)
            kind = row.get("kind", "paper")
            if kind == "corpus":
                meta = row
            elif kind == "journal":
                journals[row["name"]] = JournalMeta(row["name"], row.get("jif"))
            elif kind == "paper":
                records.append((i, _record_from_mapping(row, i)))
            else:
                raise CorpusError(f"unknown row kind {kind!r}", row=i)
    return records, journals, meta


def _read_csv(path: Path):
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = {"id", "year", "citations"} - set(reader.fieldnames or ())
        if missing:
            raise CorpusError(f"CSV header lacks {sorted(missing)}", row=1)
        for i, row in enumerate(reader, 2):
            if None in row:
                raise CorpusError("too many fields", row=i)
            records.append((i, _record_from_mapping(row, i)))
    return records, {}, {}


def load_corpus(
    path: str | Path,
    format: str | None = None,
    *,
    pub_window: tuple[int, int] | None = None,
    journals_path: str | Path | None = None,
) -> Corpus:
    """Read and validate a corpus file.

    ``format`` is ``"jsonl"`` or ``"csv"``; when omitted it is taken from the
    file suffix.  The publication window comes from, in order of precedence,
    the ``pub_window`` argument, a JSONL ``corpus`` row, or the observed
    year range.
    """
    path = Path(path)
    fmt = (format or path.suffix.lstrip(".")).lower()
    if fmt == "jsonl":
        rows, journals, meta = _read_jsonl(path)
    elif fmt == "csv":
        rows, journals, meta = _read_csv(path)
    else:
        raise CorpusError(f"unsupported corpus format {fmt!r}")
    if journals_path is not None:
        journals.update(load_journals(journals_path))

    seen: dict[str, int] = {}
    for rownum, rec in rows:
        if rec.id in seen:
            raise CorpusError(f"duplicate id {rec.id!r} (first seen on row {seen[rec.id]})", row=rownum)
        seen[rec.id] = rownum

    if pub_window is None and meta.get("pub_window"):
        pub_window = tuple(meta["pub_window"])
    if pub_window is None:
        years = [rec.year for _, rec in rows] or [0]
        pub_window = (min(years), max(years))
    start, end = pub_window
    for rownum, rec in rows:
        if not start <= rec.year <= end:
            raise CorpusError(f"year {rec.year} outside window {start}-{end}", row=rownum)

    return Corpus(
        records=tuple(rec for _, rec in rows),
        pub_window=(int(start), int(end)),
        citation_window_note=str(meta.get("citation_window", "")),
        journals=journals,
    )


def dump_corpus(corpus: Corpus, path: str | Path, format: str | None = None) -> None:
    """Write ``corpus`` so that :func:`load_corpus` reads it back unchanged.

    CSV output cannot hold journal metadata, corpus metadata or extra
    fields; use JSONL for a lossless round trip.
    """
    path = Path(path)
    fmt = (format or path.suffix.lstrip(".")).lower()
    if fmt == "jsonl":
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            meta = {
                "kind": "corpus",
                "pub_window": list(corpus.pub_window),
                "citation_window": corpus.citation_window_note,
            }
            fh.write(json.dumps(meta) + "\n")
            for name in sorted(corpus.journals):
                j = corpus.journals[name]
                fh.write(json.dumps({"kind": "journal", "name": j.name, "jif": j.jif}) + "\n")
            for rec in corpus.records:
                fh.write(json.dumps(rec.to_json(), ensure_ascii=False) + "\n")
    elif fmt == "csv":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for rec in corpus.records:
                writer.writerow(
                    [rec.id, rec.year, rec.citations, rec.journal or "",
                     "|".join(sorted(rec.groups)), rec.topic or ""]
                )
    else:
        raise CorpusError(f"unsupported corpus format {fmt!r}")


def select(
    corpus: Corpus,
    *,
    groups: Iterable[str] | None = None,
    journal: str | None = None,
    topic: str | None = None,
    years: tuple[int, int] | None = None,
    domestic: bool = False,
) -> Corpus:
    """Return the sub-corpus of records matching every given criterion.

    A record matches ``groups`` when it carries at least one of the labels.
    ``domestic=True`` keeps only records with exactly one group label,
    mimicking single-country ("domestic") publication counts.  Criteria that
    match nothing trigger a :class:`ZeroMatchWarning`; the empty corpus is
    still returned.
    """
    wanted = frozenset(groups) if groups is not None else None
    out = []
    hits = {"journal": 0, "topic": 0, "years": 0}
    hit_labels: set[str] = set()
    for rec in corpus.records:
        if wanted is not None:
            common = rec.groups & wanted
            if not common:
                continue
            hit_labels |= common
        if domestic and len(rec.groups) != 1:
            continue
        if journal is not None:
            if rec.journal != journal:
                continue
            hits["journal"] += 1
        if topic is not None:
            if rec.topic != topic:
                continue
            hits["topic"] += 1
        if years is not None:
            if not years[0] <= rec.year <= years[1]:
                continue
            hits["years"] += 1
        out.append(rec)

    unmatched = []
    if wanted is not None:
        unmatched += [f"group={g}" for g in sorted(wanted - hit_labels)]
    if journal is not None and not hits["journal"]:
        unmatched.append(f"journal={journal}")
    if topic is not None and not hits["topic"]:
        unmatched.append(f"topic={topic}")
    if years is not None and not hits["years"]:
        unmatched.append(f"years={years[0]}-{years[1]}")
    if unmatched:
        warnings.warn("filter matched no records: " + ", ".join(unmatched), ZeroMatchWarning, stacklevel=2)
    return corpus.with_records(out)
