"""Aggregation of human review score sheets into per-domain statistics.

Each record carries five 0-10 scores for one (document, reviewer) pair.
Domain averages are rounded half away from zero; reviewer agreement is the
population standard deviation of per-reviewer average scores.
"""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .domains import DOMAINS, parse_domain

SCORE_COUNT = 5
SCORE_MIN = 0
SCORE_MAX = 10

REVIEW_HEADER = ["document_id", "domain", "reviewer_id", "q1", "q2", "q3", "q4", "q5"]


class EmptyDomain(ValueError):
    """A requested domain has no review records."""


class DuplicateReview(ValueError):
    """The same (document, reviewer) pair was recorded twice."""


class MalformedSheet(ValueError):
    """A review sheet failed structural validation."""


@dataclass(frozen=True)
class ReviewRecord:
    """One reviewer's five scores for one document."""

    document_id: str
    domain: str
    reviewer_id: str
    scores: tuple[int, int, int, int, int]

    def __post_init__(self) -> None:
        if not self.document_id or not self.reviewer_id:
            raise ValueError("document_id and reviewer_id must be non-empty")
        parse_domain(self.domain)
        if len(self.scores) != SCORE_COUNT:
            raise ValueError(f"expected {SCORE_COUNT} scores, got {len(self.scores)}")
        for score in self.scores:
            if not SCORE_MIN <= score <= SCORE_MAX:
                raise ValueError(f"score {score} outside {SCORE_MIN}..{SCORE_MAX}")


@dataclass(frozen=True)
class DomainAggregate:
    """Per-domain rounded averages and reviewer standard deviations."""

    domain: str
    doc_count: int
    averages: tuple[int, ...]
    stddevs: tuple[float, ...]


def _round_half_away(value: Fraction) -> int:
    if value < 0:
        return -int(-value + Fraction(1, 2))
    return int(value + Fraction(1, 2))


def _validate(records: Sequence[ReviewRecord]) -> None:
    seen: set[tuple[str, str]] = set()
    doc_domains: dict[str, str] = {}
    for record in records:
        key = (record.document_id, record.reviewer_id)
        if key in seen:
            raise DuplicateReview(
                f"duplicate record for document {record.document_id!r} "
                f"by reviewer {record.reviewer_id!r}"
            )
        seen.add(key)
        known = doc_domains.setdefault(record.document_id, record.domain)
        if known != record.domain:
            raise MalformedSheet(
                f"document {record.document_id!r} appears under domains "
                f"{known!r} and {record.domain!r}"
            )


def _by_domain(records: Sequence[ReviewRecord]) -> dict[str, list[ReviewRecord]]:
    grouped: dict[str, list[ReviewRecord]] = {}
    for record in records:
        grouped.setdefault(record.domain, []).append(record)
    return grouped


def _present_domains(grouped: dict[str, list[ReviewRecord]]) -> list[str]:
    return [domain for domain in DOMAINS if domain in grouped]


def domain_averages(
    records: Sequence[ReviewRecord], domains: Iterable[str] | None = None
) -> dict[str, tuple[int, ...]]:
    """Mean of all scores per domain and test question, rounded half away
    from zero. Requesting a domain with no records raises EmptyDomain."""
    _validate(records)
    grouped = _by_domain(records)
    requested = list(domains) if domains is not None else _present_domains(grouped)
    result: dict[str, tuple[int, ...]] = {}
    for domain in requested:
        rows = grouped.get(parse_domain(domain))
        if not rows:
            raise EmptyDomain(f"no review records for domain {domain!r}")
        result[domain] = tuple(
            _round_half_away(Fraction(sum(r.scores[q] for r in rows), len(rows)))
            for q in range(SCORE_COUNT)
        )
    return result


def reviewer_stddevs(
    records: Sequence[ReviewRecord], domains: Iterable[str] | None = None
) -> dict[str, tuple[float, ...]]:
    """Population standard deviation of per-reviewer average scores.

    Each reviewer's scores are first averaged over every document of the
    domain they reviewed; the deviation is then taken across reviewers.
    """
    _validate(records)
    grouped = _by_domain(records)
    requested = list(domains) if domains is not None else _present_domains(grouped)
    result: dict[str, tuple[float, ...]] = {}
    for domain in requested:
        rows = grouped.get(parse_domain(domain))
        if not rows:
            raise EmptyDomain(f"no review records for domain {domain!r}")
        by_reviewer: dict[str, list[ReviewRecord]] = {}
        for record in rows:
            by_reviewer.setdefault(record.reviewer_id, []).append(record)
        deviations = []
        for q in range(SCORE_COUNT):
            averages = [
                sum(r.scores[q] for r in reviewed) / len(reviewed)
                for reviewed in by_reviewer.values()
            ]
            deviations.append(statistics.pstdev(averages))
        result[domain] = tuple(deviations)
    return result


def aggregate(records: Sequence[ReviewRecord]) -> list[DomainAggregate]:
    """One aggregate per domain present, in canonical domain order."""
    averages = domain_averages(records)
    stddevs = reviewer_stddevs(records)
    grouped = _by_domain(records)
    return [
        DomainAggregate(
            domain=domain,
            doc_count=len({r.document_id for r in grouped[domain]}),
            averages=averages[domain],
            stddevs=stddevs[domain],
        )
        for domain in _present_domains(grouped)
    ]


def read_review_sheet(path: str | Path) -> list[ReviewRecord]:
    """Read a ``document_id,domain,reviewer_id,q1..q5`` CSV."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != REVIEW_HEADER:
            raise MalformedSheet(f"expected header {REVIEW_HEADER}, got {header}")
        records = []
        for number, row in enumerate(reader, start=2):
            if len(row) != len(REVIEW_HEADER):
                raise MalformedSheet(f"row {number}: expected {len(REVIEW_HEADER)} fields")
            document_id, domain, reviewer_id, *score_cells = row
            try:
                scores = tuple(int(cell) for cell in score_cells)
            except ValueError as exc:
                raise MalformedSheet(f"row {number}: non-integer score") from exc
            records.append(
                ReviewRecord(
                    document_id=document_id,
                    domain=domain,
                    reviewer_id=reviewer_id,
                    scores=scores,  # type: ignore[arg-type]
                )
            )
        return records


def format_report(aggregates: Sequence[DomainAggregate]) -> str:
    """Aligned-text report: one row per domain plus an overall-average row."""
    lines = []
    header = f"{'Domain':<28}{'Docs':>6}"
    header += "".join(f"{f'Q{i}':>5}" for i in range(1, SCORE_COUNT + 1))
    header += "".join(f"{f'SD{i}':>7}" for i in range(1, SCORE_COUNT + 1))
    lines.append(header)
    for agg in aggregates:
        row = f"{agg.domain:<28}{agg.doc_count:>6}"
        row += "".join(f"{value:>5d}" for value in agg.averages)
        row += "".join(f"{value:>7.2f}" for value in agg.stddevs)
        lines.append(row)
    if aggregates:
        count = len(aggregates)
        mean_docs = sum(a.doc_count for a in aggregates) / count
        mean_avgs = [
            sum(a.averages[q] for a in aggregates) / count for q in range(SCORE_COUNT)
        ]
        mean_devs = [
            sum(a.stddevs[q] for a in aggregates) / count for q in range(SCORE_COUNT)
        ]
        row = f"{'Overall Average':<28}{mean_docs:>6.1f}"
        row += "".join(f"{value:>5.1f}" for value in mean_avgs)
        row += "".join(f"{value:>7.2f}" for value in mean_devs)
        lines.append(row)
    return "\n".join(lines)
