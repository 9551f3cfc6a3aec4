"""Command line entry point: tag files, score predictions, split
corpora, and serve the HTTP API.

Config files are UTF-8, either JSON objects or ``key=value`` lines
(``#`` comments allowed); keys mirror the PipelineConfig and
ServiceConfig fields. Command line flags override file values.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import Corpus, SplitSpec, read_conll, split as split_corpus, write_conll
from .errors import AnerError
from .evaluation import export_report, render_report, score
from .pipeline import NerPipeline, PipelineConfig, build_pipeline
from .service import ServiceConfig, serve
from .tags import encode_spans

_PIPELINE_KEYS = set(PipelineConfig.__dataclass_fields__)
_INT_KEYS = {"max_sequence_length", "window_stride", "mock_seed", "port", "request_char_limit"}


def load_config(path: str | Path) -> dict:
    """Read a JSON or ``key=value`` config file into a plain dict."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ValueError(f"config {path} must hold a JSON object")
        return data
    values: dict = {}
    for line_number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        key, separator, value = line.partition("=")
        if not separator or not key.strip():
            raise ValueError(f"config {path} line {line_number}: expected key=value")
        values[key.strip()] = value.strip()
    return values


def _coerce(values: dict) -> dict:
    out = dict(values)
    for key in _INT_KEYS & set(out):
        out[key] = int(out[key])
    return out


def _pipeline_from_args(args) -> NerPipeline:
    values = _coerce(load_config(args.config)) if args.config else {}
    values = {k: v for k, v in values.items() if k in _PIPELINE_KEYS}
    if args.model:
        values["classifier"] = args.model
    if args.approach:
        values["alignment"] = args.approach
    if args.no_external_translit:
        values.pop("external_endpoint", None)
    return build_pipeline(PipelineConfig(**values))


def _read_lines(path: str) -> list[str]:
    if path == "-":
        return sys.stdin.read().splitlines()
    return Path(path).read_text(encoding="utf-8").splitlines()


def _write_text(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _cmd_tag(args) -> int:
    pipeline = _pipeline_from_args(args)
    sentences = []
    for line in _read_lines(args.input):
        if not line.strip():
            continue
        result = pipeline.annotate(line)
        if not result.normalized_text:
            continue  # nothing survived cleaning (emoji-only line etc.)
        words = result.normalized_text.split(" ")
        sentences.append(encode_spans(words, result.spans))
    _write_text(args.output, write_conll(Corpus(tuple(sentences))))
    return 0


def _cmd_eval(args) -> int:
    gold = read_conll(Path(args.gold).read_text(encoding="utf-8"), source_name=args.gold)
    predicted = read_conll(
        Path(args.predicted).read_text(encoding="utf-8"), source_name=args.predicted
    )
    report = score(gold, predicted)
    sys.stdout.write(render_report(report))
    if args.export:
        Path(args.export).write_text(export_report(report), encoding="utf-8")
    return 0


def _cmd_split(args) -> int:
    fractions = args.fractions.split(",")
    if len(fractions) != 3:
        raise ValueError("--fractions needs three comma-separated values")
    corpus = read_conll(Path(args.input).read_text(encoding="utf-8"), source_name=args.input)
    spec = SplitSpec.of(*fractions, seed=args.seed)
    parts = split_corpus(corpus, spec)
    for part, path in zip(parts, (args.train, args.eval, args.test)):
        Path(path).write_text(write_conll(part), encoding="utf-8")
        print(f"{path}: {len(part)} sentences")
    return 0


def _cmd_serve(args) -> int:
    values = _coerce(load_config(args.config)) if args.config else {}
    model_values = {k: v for k, v in values.items() if k in _PIPELINE_KEYS}
    if args.model:
        model_values["classifier"] = args.model
    if args.approach:
        model_values["alignment"] = args.approach
    if args.no_external_translit:
        model_values.pop("external_endpoint", None)
    service_values = {
        k: v for k, v in values.items()
        if k in ("host", "port", "request_char_limit", "wikipedia_base")
    }
    if args.host:
        service_values["host"] = args.host
    if args.port:
        service_values["port"] = args.port
    if model_values:
        model_id = model_values.setdefault("model_id", "aner")
        service_values["models"] = {model_id: PipelineConfig(**model_values)}
    serve(ServiceConfig(**service_values))
    return 0


def _add_pipeline_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="pipeline config file (JSON or key=value)")
    parser.add_argument("--model", help="classifier: mock, gazetteer, or a model directory")
    parser.add_argument(
        "--approach", choices=("all", "first"),
        help="sub-token label alignment approach",
    )
    parser.add_argument(
        "--no-external-translit", action="store_true",
        help="force the local transliteration rules even if an endpoint is configured",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aner",
        description="Arabic/Arabizi named entity recognition toolkit",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    tag = commands.add_parser("tag", help="tag a text file (one sentence per line)")
    tag.add_argument("input", help="input text file, or - for stdin")
    tag.add_argument("-o", "--output", default="-", help="CoNLL output file, or - for stdout")
    _add_pipeline_flags(tag)
    tag.set_defaults(handler=_cmd_tag)

    evaluate = commands.add_parser("eval", help="score a predicted CoNLL file against gold")
    evaluate.add_argument("gold")
    evaluate.add_argument("predicted")
    evaluate.add_argument("--export", help="also write key=value metrics to this file")
    evaluate.set_defaults(handler=_cmd_eval)

    splitter = commands.add_parser("split", help="deterministic train/eval/test split")
    splitter.add_argument("input")
    splitter.add_argument("--train", default="train.conll")
    splitter.add_argument("--eval", default="eval.conll")
    splitter.add_argument("--test", default="test.conll")
    splitter.add_argument("--fractions", default="0.8,0.1,0.1")
    splitter.add_argument("--seed", type=int, default=0)
    splitter.set_defaults(handler=_cmd_split)

    server = commands.add_parser("serve", help="run the HTTP service")
    server.add_argument("--host")
    server.add_argument("--port", type=int)
    _add_pipeline_flags(server)
    server.set_defaults(handler=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (AnerError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
