"""Span-matching evaluation of predicted noun phrases against gold spans.

Two matching modes: full (both boundaries equal) and partial (at least one
boundary equal). Matching is greedy one-to-one in text order; counts are
micro-averaged over documents. Three prediction variants are scored:
UD+NER (extraction plus entity merging), UD (extraction alone), and a
baseline that treats every noun and personal pronoun as its own phrase.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

from .conllu import Document, Sentence, document_trees
from .entities import EntitySpan, Gazetteer, NerConfig, filter_spans, match_gazetteer, merge_spans
from .extractor import DEFAULT_CONFIG, ExtractionConfig, NounPhrase, extract_document

logger = logging.getLogger(__name__)

MODES = ("full", "partial")
VARIANTS = ("UD+NER", "UD", "baseline")


class EvaluationError(ValueError):
    """Gold/corpus disagreement or malformed gold input."""


@dataclass(frozen=True)
class Span:
    """A scored span; doc_id + sentence_id identify the sentence."""

    doc_id: str
    sentence_id: str
    start: int
    end: int


@dataclass(frozen=True)
class GoldAnnotation:
    """Expert-marked spans of one document as (sentence_id, start, end)."""

    doc_id: str
    clusters: tuple[tuple[str, int, int], ...]


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int

    def __post_init__(self) -> None:
        if min(self.tp, self.fp, self.fn) < 0:
            raise ValueError("negative confusion count")

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn)


@dataclass(frozen=True)
class MetricsReport:
    precision: float
    recall: float
    f1: float
    mode: str
    variant: str


@dataclass(frozen=True)
class EvaluationRow:
    report: MetricsReport
    counts: ConfusionCounts


def baseline_extract(sentence: Sentence) -> list[NounPhrase]:
    """Singleton phrases: every noun, plus every personal pronoun."""
    phrases = []
    for t in sentence.tokens:
        if t.upos == "NOUN" or (t.upos == "PRON" and t.feats.get("PronType") == "Prs"):
            phrases.append(
                NounPhrase(
                    sentence_id=sentence.sentence_id,
                    head_index=t.index,
                    start=t.index,
                    end=t.index,
                )
            )
    return phrases


def match_full(pred: Span, gold: Span) -> bool:
    return (
        pred.doc_id == gold.doc_id
        and pred.sentence_id == gold.sentence_id
        and pred.start == gold.start
        and pred.end == gold.end
    )


def match_partial(pred: Span, gold: Span) -> bool:
    return (
        pred.doc_id == gold.doc_id
        and pred.sentence_id == gold.sentence_id
        and (pred.start == gold.start or pred.end == gold.end)
    )


_MATCHERS = {"full": match_full, "partial": match_partial}


def score(preds: Sequence[Span], golds: Sequence[Span], mode: str) -> ConfusionCounts:
    """Greedy one-to-one matching in the given (text) order.

    Each prediction takes the first still-unmatched gold span it satisfies.
    tp + fp == len(preds) and tp + fn == len(golds) always hold.
    """
    try:
        matcher = _MATCHERS[mode]
    except KeyError:
        raise ValueError(f"unknown matching mode {mode!r}") from None
    taken = [False] * len(golds)
    tp = 0
    for p in preds:
        for j, g in enumerate(golds):
            if not taken[j] and matcher(p, g):
                taken[j] = True
                tp += 1
                break
    return ConfusionCounts(tp=tp, fp=len(preds) - tp, fn=len(golds) - tp)


def metrics(counts: ConfusionCounts, mode: str = "full", variant: str = "UD") -> MetricsReport:
    """Precision, recall and F1 with the zero-denominator convention P=R=F=0."""
    p_den = counts.tp + counts.fp
    r_den = counts.tp + counts.fn
    precision = counts.tp / p_den if p_den else 0.0
    recall = counts.tp / r_den if r_den else 0.0
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return MetricsReport(precision=precision, recall=recall, f1=f1, mode=mode, variant=variant)


def load_gold(source: str | Path | IO[str]) -> list[GoldAnnotation]:
    """Read gold records: tab-separated ``doc_id sentence_id start end``.

    Prediction files (six columns) are accepted too; the extra columns are
    ignored, so an extraction output can serve as gold directly. Spans must
    be non-overlapping per sentence.
    """
    if hasattr(source, "read"):
        lines = list(source)
        origin = "<stream>"
    else:
        with open(source, encoding="utf-8") as fh:
            lines = list(fh)
        origin = str(source)
    by_doc: dict[str, list[tuple[str, int, int]]] = {}
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) not in (4, 6):
            raise EvaluationError(
                f"{origin}: line {line_no}: expected 4 gold columns "
                f"(or a 6-column prediction record), got {len(cols)}"
            )
        doc_id, sentence_id = cols[0], cols[1]
        try:
            start, end = int(cols[2]), int(cols[3])
        except ValueError:
            raise EvaluationError(
                f"{origin}: line {line_no}: non-integer token index"
            ) from None
        if start < 1 or start > end:
            raise EvaluationError(
                f"{origin}: line {line_no}: bad span [{start}, {end}]"
            )
        by_doc.setdefault(doc_id, []).append((sentence_id, start, end))
    for doc_id, clusters in by_doc.items():
        per_sent: dict[str, list[tuple[int, int]]] = {}
        for sid, start, end in clusters:
            per_sent.setdefault(sid, []).append((start, end))
        for sid, spans in per_sent.items():
            spans.sort()
            for (s1, e1), (s2, _) in zip(spans, spans[1:]):
                if s2 <= e1:
                    raise EvaluationError(
                        f"{origin}: overlapping gold spans in document "
                        f"{doc_id!r} sentence {sid!r}"
                    )
    return [GoldAnnotation(doc_id=d, clusters=tuple(c)) for d, c in by_doc.items()]


def predict_variant(
    doc: Document,
    variant: str,
    extraction: ExtractionConfig = DEFAULT_CONFIG,
    ner: NerConfig = NerConfig(),
    gazetteer: Gazetteer | None = None,
    external_spans: Sequence[EntitySpan] = (),
) -> list[NounPhrase]:
    """Predictions of one variant for one document, in text order.

    The same code path backs both the extract command and the evaluation
    table, so extract-then-evaluate round trips exactly.
    """
    if variant == "baseline":
        phrases: list[NounPhrase] = []
        for sent in doc.sentences:
            phrases.extend(baseline_extract(sent))
        return phrases
    if variant not in ("UD", "UD+NER"):
        raise ValueError(f"unknown variant {variant!r}")
    trees = document_trees(doc)
    groups = extract_document(trees, extraction)
    if variant == "UD":
        return groups
    spans: list[EntitySpan] = []
    if gazetteer is not None:
        for sent in doc.sentences:
            spans.extend(match_gazetteer(sent, gazetteer, doc_id=doc.doc_id))
    spans.extend(
        sp for sp in external_spans if sp.doc_id is None or sp.doc_id == doc.doc_id
    )
    spans = filter_spans(spans, ner)
    if not ner.merge_enabled or not spans:
        return groups
    return merge_spans(groups, spans, doc.sentences, extraction)


def _to_spans(doc_id: str, phrases: Iterable[NounPhrase]) -> list[Span]:
    return [Span(doc_id, p.sentence_id, p.start, p.end) for p in phrases]


def evaluate_variants(
    corpus: Sequence[Document],
    gold: Sequence[GoldAnnotation],
    extraction: ExtractionConfig = DEFAULT_CONFIG,
    ner: NerConfig = NerConfig(),
    gazetteer: Gazetteer | None = None,
    external_spans: Sequence[EntitySpan] = (),
    modes: Sequence[str] = MODES,
    variants: Sequence[str] = VARIANTS,
) -> list[EvaluationRow]:
    """Score every variant in every mode over the corpus (micro-averaged).

    Gold documents missing from the corpus are an error; corpus documents
    without gold records are scored against an empty gold set.
    """
    corpus_ids = {doc.doc_id for doc in corpus}
    gold_by_doc: Mapping[str, GoldAnnotation] = {g.doc_id: g for g in gold}
    missing = sorted(set(gold_by_doc) - corpus_ids)
    if missing:
        raise EvaluationError(
            "gold references documents missing from the corpus: " + ", ".join(missing)
        )

    golds: list[Span] = []
    for doc in corpus:
        ann = gold_by_doc.get(doc.doc_id)
        if ann is not None:
            golds.extend(Span(doc.doc_id, sid, s, e) for sid, s, e in ann.clusters)

    rows: list[EvaluationRow] = []
    preds_by_variant: dict[str, list[Span]] = {}
    for variant in variants:
        preds: list[Span] = []
        for doc in corpus:
            preds.extend(
                _to_spans(
                    doc.doc_id,
                    predict_variant(
                        doc,
                        variant,
                        extraction=extraction,
                        ner=ner,
                        gazetteer=gazetteer,
                        external_spans=external_spans,
                    ),
                )
            )
        preds_by_variant[variant] = preds
    for mode in modes:
        for variant in variants:
            counts = score(preds_by_variant[variant], golds, mode)
            rows.append(
                EvaluationRow(report=metrics(counts, mode=mode, variant=variant), counts=counts)
            )
    return rows


def format_table(rows: Sequence[EvaluationRow]) -> str:
    """Aligned per-mode tables of precision/recall/F1 by variant."""
    lines = ["metrics micro-averaged over documents (counts summed, then P/R/F1)"]
    for mode in MODES:
        mode_rows = [r for r in rows if r.report.mode == mode]
        if not mode_rows:
            continue
        lines.append("")
        lines.append(f"mode: {mode}")
        lines.append(f"{'variant':<10} {'precision':>9} {'recall':>9} {'f1':>9} {'tp':>6} {'fp':>6} {'fn':>6}")
        for row in mode_rows:
            r = row.report
            c = row.counts
            lines.append(
                f"{r.variant:<10} {r.precision:>9.3f} {r.recall:>9.3f} {r.f1:>9.3f} "
                f"{c.tp:>6} {c.fp:>6} {c.fn:>6}"
            )
    return "\n".join(lines)


def metrics_records(rows: Sequence[EvaluationRow]) -> list[dict]:
    """Machine-readable rows, one dict per variant and mode."""
    return [
        {
            "variant": r.report.variant,
            "mode": r.report.mode,
            "precision": r.report.precision,
            "recall": r.report.recall,
            "f1": r.report.f1,
            "tp": r.counts.tp,
            "fp": r.counts.fp,
            "fn": r.counts.fn,
        }
        for r in rows
    ]


def write_metrics(rows: Sequence[EvaluationRow], stream: IO[str]) -> None:
    """One JSON record per line, mirroring ``metrics_records``."""
    for record in metrics_records(rows):
        stream.write(json.dumps(record, ensure_ascii=False) + "\n")
