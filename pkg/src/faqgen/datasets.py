"""SQuAD v1.1 parsing and assembly of the three training tables.

Question-generation tables group questions that share a byte-identical
context and are split per domain; answer tables merge SQuAD records with
custom rows, with or without the completed-answer column.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

from .domains import DOMAINS, parse_domain

DEFAULT_ROW_FLOOR = 750
QUESTION_JOINER = " | "

QG_HEADER = ["Context", "Questions List"]
AE_HEADER = ["Context", "Question", "Answer Phrase"]
AC_HEADER = ["Context", "Question", "Answer Phrase", "Complete Answer"]
CUSTOM_HEADER = AC_HEADER


class MalformedDataset(ValueError):
    """Input data did not match the expected structure."""

    def __init__(self, path: str, detail: str):
        self.path = path
        super().__init__(f"{path}: {detail}")


class PipeInQuestion(ValueError):
    """A question contains the '|' separator and cannot be serialized."""


class MissingCompleteAnswer(ValueError):
    """A completion-table row lacks its required complete answer."""


@dataclass(frozen=True)
class SquadRecord:
    """One (context, question) pair with the first listed answer."""

    context: str
    question: str
    answer_text: str

    def __post_init__(self) -> None:
        if not self.context or not self.question or not self.answer_text:
            raise ValueError("SquadRecord fields must be non-empty")


@dataclass(frozen=True)
class QgRow:
    """A context with every question asked of it, in original order."""

    context: str
    questions_list: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.questions_list:
            raise ValueError("questions_list must be non-empty")
        for question in self.questions_list:
            if "|" in question:
                raise PipeInQuestion(f"question contains '|': {question!r}")


@dataclass(frozen=True)
class AnswerRow:
    """One row of the answer-extraction or answer-completion table."""

    context: str
    question: str
    answer_phrase: str
    complete_answer: str | None = None

    def __post_init__(self) -> None:
        if not self.context or not self.question or not self.answer_phrase:
            raise ValueError("AnswerRow context/question/answer_phrase must be non-empty")


@dataclass(frozen=True)
class ShortfallEntry:
    """A domain whose table came up short of the row floor."""

    domain: str
    rows: int
    floor: int


def parse_squad(raw: bytes | str) -> list[SquadRecord]:
    """Parse SQuAD v1.1 JSON into flat records, document order preserved.

    Every malformed node raises :class:`MalformedDataset` carrying the JSON
    path of the offender. Multiple annotated answers collapse to the first.
    """
    if isinstance(raw, (bytes, bytearray)):
        raw = raw.decode("utf-8")
    try:
        payload = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise MalformedDataset("$", f"not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or not isinstance(payload.get("data"), list):
        raise MalformedDataset("data", "missing or not a list")

    records: list[SquadRecord] = []
    for ai, article in enumerate(payload["data"]):
        base = f"data[{ai}]"
        if not isinstance(article, dict) or not isinstance(article.get("paragraphs"), list):
            raise MalformedDataset(f"{base}.paragraphs", "missing or not a list")
        for pi, paragraph in enumerate(article["paragraphs"]):
            ppath = f"{base}.paragraphs[{pi}]"
            if not isinstance(paragraph, dict):
                raise MalformedDataset(ppath, "not an object")
            context = paragraph.get("context")
            if not isinstance(context, str) or not context:
                raise MalformedDataset(f"{ppath}.context", "missing or empty")
            qas = paragraph.get("qas")
            if not isinstance(qas, list):
                raise MalformedDataset(f"{ppath}.qas", "missing or not a list")
            for qi, qa in enumerate(qas):
                qpath = f"{ppath}.qas[{qi}]"
                if not isinstance(qa, dict):
                    raise MalformedDataset(qpath, "not an object")
                question = qa.get("question")
                if not isinstance(question, str) or not question:
                    raise MalformedDataset(f"{qpath}.question", "missing or empty")
                answers = qa.get("answers")
                if not isinstance(answers, list) or not answers:
                    raise MalformedDataset(f"{qpath}.answers", "missing or empty")
                first = answers[0]
                if not isinstance(first, dict) or not isinstance(first.get("text"), str) \
                        or not first["text"]:
                    raise MalformedDataset(f"{qpath}.answers[0].text", "missing or empty")
                records.append(
                    SquadRecord(context=context, question=question, answer_text=first["text"])
                )
    return records


def build_qg_datasets(
    records: Iterable[SquadRecord],
    classify_fn: Callable[[str], str],
    floor: int = DEFAULT_ROW_FLOOR,
) -> tuple[dict[str, list[QgRow]], list[ShortfallEntry]]:
    """Group records by identical context and split the rows per domain.

    Contexts keep first-appearance order, as do questions within a context.
    Every one of the 17 domains gets a table (possibly empty); the shortfall
    report lists each domain with fewer than *floor* rows.
    """
    grouped: dict[str, list[str]] = {}
    for record in records:
        if "|" in record.question:
            raise PipeInQuestion(f"question contains '|': {record.question!r}")
        grouped.setdefault(record.context, []).append(record.question)

    tables: dict[str, list[QgRow]] = {domain: [] for domain in DOMAINS}
    for context, questions in grouped.items():
        domain = parse_domain(classify_fn(context))
        tables[domain].append(QgRow(context=context, questions_list=tuple(questions)))

    shortfalls = [
        ShortfallEntry(domain=domain, rows=len(rows), floor=floor)
        for domain, rows in tables.items()
        if len(rows) < floor
    ]
    return tables, shortfalls


def build_ae_dataset(
    squad: Iterable[SquadRecord], custom: Iterable[AnswerRow]
) -> list[AnswerRow]:
    """Answer-extraction table: SQuAD rows first, then custom rows with the
    complete-answer column dropped."""
    rows = [
        AnswerRow(context=r.context, question=r.question, answer_phrase=r.answer_text)
        for r in squad
    ]
    rows.extend(
        AnswerRow(context=r.context, question=r.question, answer_phrase=r.answer_phrase)
        for r in custom
    )
    return rows


def build_ac_dataset(custom: Iterable[AnswerRow]) -> list[AnswerRow]:
    """Answer-completion table: custom rows validated to carry a complete answer."""
    rows = list(custom)
    for index, row in enumerate(rows):
        if not row.complete_answer:
            raise MissingCompleteAnswer(f"row {index} has no complete answer")
    return rows


# ---------------------------------------------------------------------------
# CSV input/output
# ---------------------------------------------------------------------------


def domain_slug(domain: str) -> str:
    """Lowercase file-name slug: spaces and commas become underscores."""
    return "".join("_" if c in " ," else c for c in domain.lower())


def qg_filename(domain: str) -> str:
    return f"qg_{domain_slug(domain)}.csv"


def write_qg_table(path: str | Path, rows: Iterable[QgRow]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(QG_HEADER)
        for row in rows:
            writer.writerow([row.context, QUESTION_JOINER.join(row.questions_list)])


def read_qg_table(path: str | Path) -> list[QgRow]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != QG_HEADER:
            raise MalformedDataset(str(path), f"expected header {QG_HEADER}, got {header}")
        return [
            QgRow(context=context, questions_list=tuple(cell.split(QUESTION_JOINER)))
            for context, cell in reader
        ]


def write_answer_table(
    path: str | Path, rows: Iterable[AnswerRow], include_complete: bool
) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(AC_HEADER if include_complete else AE_HEADER)
        for row in rows:
            record = [row.context, row.question, row.answer_phrase]
            if include_complete:
                record.append(row.complete_answer or "")
            writer.writerow(record)


def read_custom_table(path: str | Path) -> list[AnswerRow]:
    """Read a custom dataset CSV; an empty complete-answer cell means absent."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CUSTOM_HEADER:
            raise MalformedDataset(str(path), f"expected header {CUSTOM_HEADER}, got {header}")
        rows = []
        for number, record in enumerate(reader, start=2):
            if len(record) != 4:
                raise MalformedDataset(str(path), f"row {number}: expected 4 fields")
            context, question, phrase, complete = record
            rows.append(
                AnswerRow(
                    context=context,
                    question=question,
                    answer_phrase=phrase,
                    complete_answer=complete or None,
                )
            )
        return rows
