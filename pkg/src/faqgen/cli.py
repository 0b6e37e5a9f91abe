"""Command-line front end: generation, chunk inspection, stub server,
dataset builders and review aggregation.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Mapping

from .chunker import DEFAULT_CHUNK_WORDS, EmptyDocument, SourceDocument, build_chunks
from .datasets import (
    MalformedDataset,
    MissingCompleteAnswer,
    PipeInQuestion,
    build_ac_dataset,
    build_ae_dataset,
    build_qg_datasets,
    parse_squad,
    qg_filename,
    read_custom_table,
    write_answer_table,
    write_qg_table,
)
from .domains import (
    InvalidDomain,
    LexiconFormatError,
    classify,
    default_lexicon,
    load_lexicon,
)
from .gateway import DEFAULT_QUESTION_CAP, BackendEndpointSet, GatewayError
from .pipeline import InvalidCount, PipelineConfig, run
from .reviews import (
    DuplicateReview,
    EmptyDomain,
    MalformedSheet,
    aggregate,
    format_report,
    read_review_sheet,
)
from .stubserver import BindFailure, serve_stub

CONFIG_ENV_VAR = "FAQGEN_CONFIG"

_INT_KEYS = {"chunk_size_words", "question_cap", "timeout_ms", "max_retries", "workers"}
_STR_KEYS = {
    "domain_url",
    "questions_url",
    "answer_phrase_url",
    "complete_answer_url",
    "lexicon_path",
}

_RUNTIME_ERRORS = (
    EmptyDocument,
    GatewayError,
    InvalidDomain,
    InvalidCount,
    LexiconFormatError,
    MalformedDataset,
    PipeInQuestion,
    MissingCompleteAnswer,
    EmptyDomain,
    DuplicateReview,
    MalformedSheet,
    BindFailure,
    OSError,
)


class UsageError(Exception):
    pass


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return number


def _require_file(path: str) -> Path:
    file_path = Path(path)
    if not file_path.is_file():
        raise UsageError(f"file not found: {path}")
    return file_path


def _read_document(path: str) -> SourceDocument:
    file_path = _require_file(path)
    return SourceDocument.from_text(file_path.stem, file_path.read_text(encoding="utf-8"))


def _config_values(config_flag: str | None, environment: Mapping[str, str]) -> dict:
    path = config_flag or environment.get(CONFIG_ENV_VAR)
    if not path:
        return {}
    file_path = _require_file(path)
    values: dict = {}
    for number, raw_line in enumerate(
        file_path.read_text(encoding="utf-8").splitlines(), start=1
    ):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{number}: expected 'key = value'")
        key = key.strip()
        value = value.strip()
        if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
            value = value[1:-1]
        if key in _INT_KEYS:
            try:
                values[key] = int(value)
            except ValueError:
                raise UsageError(f"{path}:{number}: {key} must be an integer") from None
        elif key in _STR_KEYS:
            values[key] = value
        else:
            raise UsageError(f"{path}:{number}: unknown key {key!r}")
    return values


def _pipeline_config(args: argparse.Namespace, environment: Mapping[str, str]) -> PipelineConfig:
    values = _config_values(args.config, environment)
    endpoints = BackendEndpointSet(
        domain_url=values.get("domain_url") or None,
        questions_url=values.get("questions_url") or None,
        answer_phrase_url=values.get("answer_phrase_url") or None,
        complete_answer_url=values.get("complete_answer_url") or None,
        timeout_ms=values.get("timeout_ms", 10_000),
        max_retries=values.get("max_retries", 2),
    )
    workers = args.workers if args.workers is not None else values.get("workers")
    kwargs = dict(
        chunk_size_words=values.get("chunk_size_words", DEFAULT_CHUNK_WORDS),
        question_cap=values.get("question_cap", DEFAULT_QUESTION_CAP),
        endpoints=endpoints,
        lexicon_path=values.get("lexicon_path") or None,
        requested_faq_count=args.count,
    )
    if workers is not None:
        kwargs["worker_count"] = workers
    return PipelineConfig(**kwargs)


def _cmd_generate(args: argparse.Namespace, environment: Mapping[str, str]) -> int:
    config = _pipeline_config(args, environment)
    document = _read_document(args.input)
    result = run(document, config)
    payload = result.to_json()
    if args.output:
        Path(args.output).write_text(payload, encoding="utf-8")
    else:
        print(payload)
    for warning in result.warnings:
        print(f"warning [{warning.kind}] {warning.message}", file=sys.stderr)
    return 0


def _cmd_chunk(args: argparse.Namespace, environment: Mapping[str, str]) -> int:
    document = _read_document(args.input)
    for chunk in build_chunks(document, args.size):
        preview = " ".join(chunk.context.split()[:8])
        print(f"{chunk.index}\t{chunk.word_count}\t{preview}")
    return 0


def _cmd_classify(args: argparse.Namespace, environment: Mapping[str, str]) -> int:
    document = _read_document(args.input)
    lexicon = default_lexicon()
    for chunk in build_chunks(document, args.size):
        print(f"{chunk.index}\t{classify(chunk.context, lexicon)}")
    return 0


def _cmd_serve_stub(args: argparse.Namespace, environment: Mapping[str, str]) -> int:
    host, _, port_text = args.bind.rpartition(":")
    if not host or not port_text.isdigit():
        raise UsageError(f"--bind must be host:port, got {args.bind!r}")
    print(f"stub backend listening on {args.bind}")
    serve_stub(args.bind)
    return 0


def _cmd_dataset_squad_group(args: argparse.Namespace, environment: Mapping[str, str]) -> int:
    records = parse_squad(_require_file(args.squad).read_bytes())
    lexicon = load_lexicon(_require_file(args.lexicon)) if args.lexicon else default_lexicon()
    tables, shortfalls = build_qg_datasets(
        records, lambda context: classify(context, lexicon), floor=args.floor
    )
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for domain, rows in tables.items():
        write_qg_table(out_dir / qg_filename(domain), rows)
    print(f"wrote {len(tables)} domain tables to {out_dir}")
    for entry in shortfalls:
        print(f"shortfall: {entry.domain}: {entry.rows} rows (floor {entry.floor})")
    return 0


def _cmd_dataset_build_ae(args: argparse.Namespace, environment: Mapping[str, str]) -> int:
    records = parse_squad(_require_file(args.squad).read_bytes())
    custom = read_custom_table(_require_file(args.custom)) if args.custom else []
    rows = build_ae_dataset(records, custom)
    write_answer_table(args.output, rows, include_complete=False)
    print(f"wrote {len(rows)} rows to {args.output}")
    return 0


def _cmd_dataset_build_ac(args: argparse.Namespace, environment: Mapping[str, str]) -> int:
    custom = read_custom_table(_require_file(args.custom))
    rows = build_ac_dataset(custom)
    write_answer_table(args.output, rows, include_complete=True)
    print(f"wrote {len(rows)} rows to {args.output}")
    return 0


def _cmd_eval_aggregate(args: argparse.Namespace, environment: Mapping[str, str]) -> int:
    records = read_review_sheet(_require_file(args.input))
    print(format_report(aggregate(records)))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="faqgen", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    generate = commands.add_parser("generate", help="generate ranked FAQs for a document")
    generate.add_argument("--input", required=True, help="plain-text input file")
    generate.add_argument("--count", required=True, type=_positive_int,
                          help="number of FAQs to return")
    generate.add_argument("--config", help="config file (key = value lines)")
    generate.add_argument("--workers", type=_positive_int, help="chunk worker count")
    generate.add_argument("--output", help="write the result JSON here instead of stdout")
    generate.set_defaults(handler=_cmd_generate)

    chunk = commands.add_parser("chunk", help="show the chunk layout of a document")
    chunk.add_argument("--input", required=True)
    chunk.add_argument("--size", type=_positive_int, default=DEFAULT_CHUNK_WORDS,
                       help="target words per chunk")
    chunk.set_defaults(handler=_cmd_chunk)

    classify_cmd = commands.add_parser("classify", help="show the domain of every chunk")
    classify_cmd.add_argument("--input", required=True)
    classify_cmd.add_argument("--size", type=_positive_int, default=DEFAULT_CHUNK_WORDS)
    classify_cmd.set_defaults(handler=_cmd_classify)

    serve = commands.add_parser("serve-stub", help="run the deterministic stub backend")
    serve.add_argument("--bind", required=True, help="host:port to listen on")
    serve.set_defaults(handler=_cmd_serve_stub)

    dataset = commands.add_parser("dataset", help="training-table builders")
    dataset_commands = dataset.add_subparsers(dest="dataset_command", required=True)

    squad_group = dataset_commands.add_parser(
        "squad-group", help="group SQuAD questions by context and split per domain"
    )
    squad_group.add_argument("--squad", required=True, help="SQuAD v1.1 JSON file")
    squad_group.add_argument("--output-dir", required=True)
    squad_group.add_argument("--floor", type=_positive_int, default=750,
                             help="minimum rows per domain before a shortfall is reported")
    squad_group.add_argument("--lexicon", help="alternative classifier lexicon file")
    squad_group.set_defaults(handler=_cmd_dataset_squad_group)

    build_ae = dataset_commands.add_parser(
        "build-ae", help="build the answer-extraction table"
    )
    build_ae.add_argument("--squad", required=True)
    build_ae.add_argument("--custom", help="custom dataset CSV")
    build_ae.add_argument("--output", default="ae_dataset.csv")
    build_ae.set_defaults(handler=_cmd_dataset_build_ae)

    build_ac = dataset_commands.add_parser(
        "build-ac", help="build the answer-completion table"
    )
    build_ac.add_argument("--custom", required=True)
    build_ac.add_argument("--output", default="ac_dataset.csv")
    build_ac.set_defaults(handler=_cmd_dataset_build_ac)

    eval_cmd = commands.add_parser("eval", help="review score aggregation")
    eval_commands = eval_cmd.add_subparsers(dest="eval_command", required=True)
    eval_aggregate = eval_commands.add_parser(
        "aggregate", help="aggregate a review score sheet into a report"
    )
    eval_aggregate.add_argument("--input", required=True, help="review sheet CSV")
    eval_aggregate.set_defaults(handler=_cmd_eval_aggregate)

    return parser


def run_cli(argv: list[str], environment: Mapping[str, str]) -> int:
    """Dispatch *argv*; returns the process exit code instead of exiting."""
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return int(args.handler(args, environment) or 0)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _RUNTIME_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli(sys.argv[1:], os.environ))
