"""Vote-count CSV parsing and per-election sample construction."""

from __future__ import annotations

import csv
import re
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, TextIO

from .stats import Sample

FIELDS = ("state", "year", "office", "municipality", "candidate", "votes")
_UNSIGNED = re.compile(r"[0-9]+")
_YEAR = re.compile(r"-?[0-9]+")


class SchemaError(ValueError):
    pass


class RowError(ValueError):
    def __init__(self, line: int, message: str, source: str | None = None):
        where = f"{source}:{line}" if source else f"line {line}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.source = source


class ElectionNotFound(LookupError):
    pass


@dataclass(frozen=True, order=True)
class ElectionKey:
    state: str
    year: int
    office: str

    def __str__(self) -> str:
        return f"{self.state}:{self.year}:{self.office}"

    @classmethod
    def parse(cls, text: str) -> "ElectionKey":
        """Parse ``STATE:YEAR:OFFICE``."""
        parts = text.split(":", 2)
        if len(parts) != 3 or not all(parts):
            raise ValueError(f"election key must look like STATE:YEAR:OFFICE, got {text!r}")
        return cls(parts[0], int(parts[1]), parts[2])


@dataclass(frozen=True)
class VoteRecord:
    state: str
    year: int
    office: str
    municipality: str
    candidate: str
    votes: int

    @property
    def key(self) -> ElectionKey:
        return ElectionKey(self.state, self.year, self.office)


def load_votes(
    source: TextIO, schema: Mapping[str, str] | None = None, name: str | None = None
) -> list[VoteRecord]:
    """Parse comma-separated vote rows with a header line.

    ``schema`` maps record field names to header column names; by default
    each field is read from the column of the same name. Values are
    validated as-is: no stripping, no thousands separators, no signs.
    """
    schema = {f: f for f in FIELDS} | dict(schema or {})
    reader = csv.reader(source)
    header = next(reader, None)
    if header is None:
        raise SchemaError(f"{name or 'input'}: empty file")
    index = {}
    for f in FIELDS:
        col = schema[f]
        if col not in header:
            raise SchemaError(f"{name or 'input'}: missing column {col!r}")
        index[f] = header.index(col)
    width = len(header)

    records = []
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != width:
            raise RowError(line, f"expected {width} fields, got {len(row)}", name)
        state, year, office, muni, cand, votes = (row[index[f]] for f in FIELDS)
        for f, v in (("state", state), ("office", office), ("municipality", muni), ("candidate", cand)):
            if not v:
                raise RowError(line, f"empty {f}", name)
        if not _YEAR.fullmatch(year):
            raise RowError(line, f"year {year!r} is not an integer", name)
        if not _UNSIGNED.fullmatch(votes):
            raise RowError(line, f"votes {votes!r} is not a nonnegative integer", name)
        records.append(VoteRecord(state, int(year), office, muni, cand, int(votes)))
    return records


def load_vote_files(paths: Iterable[str | Path], schema: Mapping[str, str] | None = None) -> list[VoteRecord]:
    records = []
    for p in paths:
        with open(p, newline="", encoding="utf-8") as fh:
            records.extend(load_votes(fh, schema, name=str(p)))
    return records


def election_keys(records: Iterable[VoteRecord]) -> list[ElectionKey]:
    return sorted({r.key for r in records})


def _select(records: Iterable[VoteRecord], key: ElectionKey, top_k: int):
    if top_k < 1:
        raise ValueError(f"top_k must be >= 1, got {top_k}")
    rows = [r for r in records if r.key == key]
    if not rows:
        available = ", ".join(str(k) for k in election_keys(records))
        raise ElectionNotFound(f"no election {key}; available: {available or 'none'}")
    totals: dict[str, int] = defaultdict(int)
    for r in rows:
        totals[r.candidate] += r.votes
    if len(totals) < top_k:
        raise ValueError(f"{key}: only {len(totals)} candidates, need top {top_k}")
    ranked = sorted(totals, key=lambda c: (-totals[c], c))
    chosen = ranked[:top_k]
    notes = ()
    if len(ranked) > top_k and totals[ranked[top_k - 1]] == totals[ranked[top_k]]:
        tied = sorted(c for c in ranked if totals[c] == totals[ranked[top_k - 1]])
        notes = (f"tie at rank {top_k} among {tied}; kept by name order: "
                 f"{[c for c in chosen if c in tied]}",)
    rows.sort(key=lambda r: (r.municipality, r.candidate, r.votes))
    return rows, chosen, notes


def build_sample(records: Iterable[VoteRecord], key: ElectionKey, top_k: int = 3) -> Sample:
    """Pool the per-municipality counts of the ``top_k`` statewide candidates."""
    records = list(records)
    rows, chosen, notes = _select(records, key, top_k)
    chosen = set(chosen)
    picked = [r.votes for r in rows if r.candidate in chosen]
    values = [v for v in picked if v > 0]
    if not values:
        raise ValueError(f"{key}: sample is empty after removing zero counts")
    return Sample(values, label=key, zeros_excluded=len(picked) - len(values), notes=notes)


def build_candidate_samples(
    records: Iterable[VoteRecord], key: ElectionKey, top_k: int = 3
) -> dict[str, Sample]:
    """One sample per top-``top_k`` candidate, for sensitivity checks against pooling."""
    records = list(records)
    rows, chosen, notes = _select(records, key, top_k)
    out = {}
    for cand in chosen:
        picked = [r.votes for r in rows if r.candidate == cand]
        values = [v for v in picked if v > 0]
        if not values:
            raise ValueError(f"{key}/{cand}: sample is empty after removing zero counts")
        out[cand] = Sample(values, label=(key, cand), zeros_excluded=len(picked) - len(values), notes=notes)
    return out
