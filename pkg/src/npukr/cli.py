"""Command line front end: extract, evaluate, serve."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Sequence

from .conllu import ConlluParseError, Document, read_documents
from .entities import (
    EntitySpan,
    Gazetteer,
    NerConfig,
    SpanRecordError,
    load_external_spans,
    load_gazetteer_dir,
)
from .evaluation import (
    MODES,
    VARIANTS,
    EvaluationError,
    evaluate_variants,
    format_table,
    load_gold,
    predict_variant,
    write_metrics,
)
from .extractor import DEFAULT_CONFIG, ExtractionConfig, kernel_backend

logger = logging.getLogger(__name__)


@dataclass
class RunConfig:
    """Resolved options for one command invocation."""

    command: str
    conllu_paths: list[Path] = field(default_factory=list)
    gazetteer_dir: Path | None = None
    ner_spans_path: Path | None = None
    gold_path: Path | None = None
    out_path: Path | None = None
    variant: str = "auto"
    mode: str = "both"
    extraction: ExtractionConfig = DEFAULT_CONFIG
    ner: NerConfig = NerConfig()
    host: str = "127.0.0.1"
    port: int = 8000
    storage: Path | None = None
    ui_dir: Path | None = None


def _load_corpus(cfg: RunConfig) -> list[Document]:
    corpus: list[Document] = []
    for path in cfg.conllu_paths:
        corpus.extend(read_documents(path))
    return corpus


def _load_sources(cfg: RunConfig) -> tuple[Gazetteer | None, list[EntitySpan]]:
    gazetteer = load_gazetteer_dir(cfg.gazetteer_dir) if cfg.gazetteer_dir else None
    spans = load_external_spans(cfg.ner_spans_path) if cfg.ner_spans_path else []
    return gazetteer, spans


def _pick_variant(cfg: RunConfig, have_sources: bool) -> str:
    if cfg.variant != "auto":
        return cfg.variant
    return "UD+NER" if have_sources else "UD"


def run_extract(cfg: RunConfig, out: IO[str] | None = None) -> int:
    out = out or sys.stdout
    gazetteer, spans = _load_sources(cfg)
    corpus = _load_corpus(cfg)
    variant = _pick_variant(cfg, gazetteer is not None or bool(spans))
    n_sentences = 0
    n_groups = 0
    assert cfg.out_path is not None
    with open(cfg.out_path, "w", encoding="utf-8") as fh:
        for doc in corpus:
            sentences = {s.sentence_id: s for s in doc.sentences}
            n_sentences += len(doc.sentences)
            phrases = predict_variant(
                doc,
                variant,
                extraction=cfg.extraction,
                ner=cfg.ner,
                gazetteer=gazetteer,
                external_spans=spans,
            )
            for p in phrases:
                text = p.surface(sentences[p.sentence_id])
                fh.write(
                    f"{doc.doc_id}\t{p.sentence_id}\t{p.start}\t{p.end}"
                    f"\t{p.head_index}\t{text}\n"
                )
            n_groups += len(phrases)
    out.write(
        f"variant: {variant}  kernel: {kernel_backend()}\n"
        f"documents: {len(corpus)}  sentences: {n_sentences}  groups: {n_groups}\n"
    )
    return 0

def run_evaluate(cfg: RunConfig, out: IO[str] | None = None) -> int:
    out = out or sys.stdout
    gazetteer, spans = _load_sources(cfg)
    corpus = _load_corpus(cfg)
    assert cfg.gold_path is not None
    gold = load_gold(cfg.gold_path)
    modes = MODES if cfg.mode == "both" else (cfg.mode,)
    rows = evaluate_variants(
        corpus,
        gold,
        extraction=cfg.extraction,
        ner=cfg.ner,
        gazetteer=gazetteer,
        external_spans=spans,
        modes=modes,
        variants=VARIANTS,
    )
    out.write(format_table(rows) + "\n")
    if cfg.out_path is not None:
        with open(cfg.out_path, "w", encoding="utf-8") as fh:
            write_metrics(rows, fh)
    return 0


def run_serve(cfg: RunConfig, out: IO[str] | None = None) -> int:
    out = out or sys.stdout
    from .server import make_server

    storage = cfg.storage or Path(os.environ.get("NPUKR_STORAGE", "annotations"))
    server = make_server(storage, host=cfg.host, port=cfg.port, ui_dir=cfg.ui_dir)
    out.write(
        f"annotation backend on http://{cfg.host}:{server.server_address[1]}/ "
        f"(storage: {storage})\n"
    )
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def _add_extraction_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--emit-nested",
        action="store_true",
        help="also emit groups nested inside larger ones",
    )
    parser.add_argument(
        "--keep-boundary-punct",
        action="store_true",
        help="do not shed punctuation at group boundaries",
    )


def _add_source_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--gazetteer", metavar="DIR", help="directory of <category>.txt name lists")
    parser.add_argument("--ner", metavar="FILE", help="external NER span records (TSV)")
    parser.add_argument(
        "--threshold",
        type=float,
        default=0.8,
        help="confidence threshold for NER spans (default 0.8, inclusive)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="npukr",
        description="Noun phrase extraction and evaluation for Ukrainian UD treebanks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ext = sub.add_parser("extract", help="extract noun phrase records from CoNLL-U")
    p_ext.add_argument("--conllu", nargs="+", required=True, metavar="FILE")
    p_ext.add_argument("--out", required=True, metavar="FILE")
    p_ext.add_argument(
        "--variant",
        choices=["auto", "UD", "UD+NER", "baseline"],
        default="auto",
        help="prediction variant (auto: UD+NER when entity sources are given)",
    )
    _add_source_flags(p_ext)
    _add_extraction_flags(p_ext)

    p_ev = sub.add_parser("evaluate", help="score the three variants against gold spans")
    p_ev.add_argument("--conllu", nargs="+", required=True, metavar="FILE")
    p_ev.add_argument("--gold", required=True, metavar="FILE")
    p_ev.add_argument("--mode", choices=["full", "partial", "both"], default="both")
    p_ev.add_argument("--out", metavar="FILE", help="also write JSON records here")
    _add_source_flags(p_ev)
    _add_extraction_flags(p_ev)

    p_srv = sub.add_parser("serve", help="run the annotation backend")
    p_srv.add_argument("--storage", metavar="DIR", help="cluster storage directory (or NPUKR_STORAGE)")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=8000)
    p_srv.add_argument("--ui-dir", metavar="DIR", help="serve this static UI directory at /")
    return parser


def _to_runconfig(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    if args.command in ("extract", "evaluate"):
        cfg.conllu_paths = [Path(p) for p in args.conllu]
        cfg.gazetteer_dir = Path(args.gazetteer) if args.gazetteer else None
        cfg.ner_spans_path = Path(args.ner) if args.ner else None
        cfg.ner = NerConfig(confidence_threshold=args.threshold)
        cfg.extraction = ExtractionConfig(
            emit_nested=args.emit_nested,
            trim_boundary_punct=not args.keep_boundary_punct,
        )
    if args.command == "extract":
        cfg.out_path = Path(args.out)
        cfg.variant = args.variant
    if args.command == "evaluate":
        cfg.gold_path = Path(args.gold)
        cfg.mode = args.mode
        cfg.out_path = Path(args.out) if args.out else None
    if args.command == "serve":
        cfg.storage = Path(args.storage) if args.storage else None
        cfg.host = args.host
        cfg.port = args.port
        cfg.ui_dir = Path(args.ui_dir) if args.ui_dir else None
    return cfg


_RUNNERS = {"extract": run_extract, "evaluate": run_evaluate, "serve": run_serve}


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _to_runconfig(args)
    try:
        return _RUNNERS[cfg.command](cfg)
    except (
        ConlluParseError,
        SpanRecordError,
        EvaluationError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
