"""Entity spans from gazetteers and external NER output, merged into groups.

Gazetteer matching is a longest-match left-to-right scan over token forms
and lemmas (case-insensitive; Ukrainian inflection makes surface-only
matching useless for names). Merging unions every group and entity span
that share tokens, to a fixed point, so one entity can stitch a mis-parsed
name back onto its group.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

from .conllu import Sentence
from .extractor import DEFAULT_CONFIG, ExtractionConfig, NounPhrase, is_potential_head

logger = logging.getLogger(__name__)

GAZETTEER_SOURCE = "gazetteer"
EXTERNAL_SOURCE = "external"


class SpanRecordError(ValueError):
    """A malformed external NER span record."""


@dataclass(frozen=True)
class EntitySpan:
    """Token span [start, end] with a category and model confidence."""

    sentence_id: str
    start: int
    end: int
    category: str
    confidence: float
    source: str = EXTERNAL_SOURCE
    doc_id: str | None = None

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValueError(f"span start {self.start} after end {self.end}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")


@dataclass(frozen=True)
class NerConfig:
    confidence_threshold: float = 0.8
    merge_enabled: bool = True

    def __post_init__(self) -> None:
        if not 0.0 <= self.confidence_threshold <= 1.0:
            raise ValueError(
                f"confidence threshold {self.confidence_threshold} outside [0, 1]"
            )


@dataclass
class Gazetteer:
    """Per-category name lists; entries are token sequences.

    ``entries`` maps category -> list of (lowercased tokens, original line).
    """

    entries: dict[str, list[tuple[tuple[str, ...], str]]] = field(default_factory=dict)

    def categories(self) -> list[str]:
        return list(self.entries)

    def __len__(self) -> int:
        return sum(len(v) for v in self.entries.values())


def load_gazetteer(files: Iterable[tuple[str, str | Path]]) -> Gazetteer:
    """Load (category, path) pairs: UTF-8, one entry per line, tokens
    space-separated. Duplicates within a category are dropped."""
    gaz = Gazetteer()
    for category, path in files:
        entries = gaz.entries.setdefault(category, [])
        seen = {tokens for tokens, _ in entries}
        try:
            with open(path, encoding="utf-8") as fh:
                for raw in fh:
                    line = raw.strip()
                    if not line:
                        continue
                    tokens = tuple(w.lower() for w in line.split())
                    if tokens in seen:
                        continue
                    seen.add(tokens)
                    entries.append((tokens, line))
        except OSError as exc:
            raise OSError(f"cannot read gazetteer file {path}: {exc}") from exc
    return gaz


def load_gazetteer_dir(directory: str | Path) -> Gazetteer:
    """Load every ``*.txt`` in a directory; file stems name the categories."""
    d = Path(directory)
    files = sorted(d.glob("*.txt"))
    if not files:
        logger.warning("gazetteer directory %s has no .txt files", d)
    return load_gazetteer((p.stem, p) for p in files)


def match_gazetteer(
    sentence: Sentence, gazetteer: Gazetteer, doc_id: str | None = None
) -> list[EntitySpan]:
    """Longest-match scan of one sentence against all categories.

    An entry of length k matches tokens i..i+k-1 when every entry token
    equals the token form or lemma, case-insensitively. After a match the
    scan resumes past it, so shorter matches inside are suppressed.
    """
    tokens = sentence.tokens
    n = len(tokens)
    forms = [t.form.lower() for t in tokens]
    lemmas = [t.lemma.lower() for t in tokens]

    # entries by first word for O(1) candidate lookup, longest first
    by_first: dict[str, list[tuple[tuple[str, ...], str]]] = {}
    for category, entries in gazetteer.entries.items():
        for entry_tokens, _ in entries:
            by_first.setdefault(entry_tokens[0], []).append((entry_tokens, category))
    for candidates in by_first.values():
        candidates.sort(key=lambda ec: -len(ec[0]))

    spans: list[EntitySpan] = []
    i = 0
    while i < n:
        best: tuple[tuple[str, ...], str] | None = None
        for first in (forms[i], lemmas[i]):
            for entry_tokens, category in by_first.get(first, ()):
                if best is not None and len(entry_tokens) <= len(best[0]):
                    continue
                k = len(entry_tokens)
                if i + k > n:
                    continue
                if all(
                    entry_tokens[j] in (forms[i + j], lemmas[i + j]) for j in range(k)
                ):
                    best = (entry_tokens, category)
        if best is None:
            i += 1
            continue
        k = len(best[0])
        spans.append(
            EntitySpan(
                sentence_id=sentence.sentence_id,
                start=i + 1,
                end=i + k,
                category=best[1],
                confidence=1.0,
                source=GAZETTEER_SOURCE,
                doc_id=doc_id,
            )
        )
        i += k
    return spans


def load_external_spans(source: str | Path | IO[str]) -> list[EntitySpan]:
    """Read external NER records: tab-separated ``doc_id sentence_id start
    end category confidence``, one per line, ``#`` comments allowed."""
    if hasattr(source, "read"):
        lines = list(source)
        origin = "<stream>"
    else:
        with open(source, encoding="utf-8") as fh:
            lines = list(fh)
        origin = str(source)
    spans: list[EntitySpan] = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 6:
            raise SpanRecordError(
                f"{origin}: line {line_no}: expected 6 fields, got {len(cols)}"
            )
        doc_id, sentence_id, start_s, end_s, category, conf_s = cols
        try:
            start, end = int(start_s), int(end_s)
        except ValueError:
            raise SpanRecordError(
                f"{origin}: line {line_no}: non-integer token index"
            ) from None
        try:
            confidence = float(conf_s)
        except ValueError:
            raise SpanRecordError(
                f"{origin}: line {line_no}: non-numeric confidence {conf_s!r}"
            ) from None
        if not category:
            raise SpanRecordError(f"{origin}: line {line_no}: empty category")
        try:
            spans.append(
                EntitySpan(
                    sentence_id=sentence_id,
                    start=start,
                    end=end,
                    category=category,
                    confidence=confidence,
                    source=EXTERNAL_SOURCE,
                    doc_id=doc_id,
                )
            )
        except ValueError as exc:
            raise SpanRecordError(f"{origin}: line {line_no}: {exc}") from None
    return spans


def filter_spans(
    spans: Iterable[EntitySpan], cfg: NerConfig = NerConfig()
) -> list[EntitySpan]:
    """Keep spans at or above the confidence threshold, order preserved."""
    return [s for s in spans if s.confidence >= cfg.confidence_threshold]


def _elect_head(start: int, end: int, sentence: Sentence, cfg: ExtractionConfig) -> int:
    # entity-only phrase: last head-capable token, else the first token
    if is_potential_head(sentence.token(end), cfg):
        return end
    return start


def merge_spans(
    groups: Sequence[NounPhrase],
    spans: Sequence[EntitySpan],
    sentences: Iterable[Sentence] | Mapping[str, Sentence],
    cfg: ExtractionConfig = DEFAULT_CONFIG,
) -> list[NounPhrase]:
    """Union groups with entity spans that share tokens, to a fixed point.

    Entity spans that touch no group become new phrases flagged
    ``entity_derived``. Spans whose indices fall outside their sentence are
    skipped with a warning. Output is per-sentence sorted and, with nested
    emission off upstream, pairwise non-overlapping.
    """
    if isinstance(sentences, Mapping):
        by_id = dict(sentences)
    else:
        by_id = {s.sentence_id: s for s in sentences}

    groups_by_sent: dict[str, list[NounPhrase]] = {}
    for g in groups:
        groups_by_sent.setdefault(g.sentence_id, []).append(g)
    spans_by_sent: dict[str, list[EntitySpan]] = {}
    for sp in spans:
        sent = by_id.get(sp.sentence_id)
        if sent is None:
            logger.warning(
                "entity span %s:[%d,%d] names an unknown sentence, skipped",
                sp.sentence_id, sp.start, sp.end,
            )
            continue
        if sp.start < 1 or sp.end > len(sent):
            logger.warning(
                "entity span %s:[%d,%d] outside the %d-token sentence, skipped",
                sp.sentence_id, sp.start, sp.end, len(sent),
            )
            continue
        spans_by_sent.setdefault(sp.sentence_id, []).append(sp)

    merged: list[NounPhrase] = []
    for sid, sentence in by_id.items():
        sent_groups = groups_by_sent.get(sid, [])
        sent_spans = spans_by_sent.get(sid, [])
        if not sent_groups and not sent_spans:
            continue
        if not sent_spans:
            merged.extend(sorted(sent_groups, key=lambda g: (g.start, g.end)))
            continue
        # sweep over intervals; transitive overlap closes the fixed point
        items: list[tuple[int, int, NounPhrase | None]] = [
            (g.start, g.end, g) for g in sent_groups
        ] + [(sp.start, sp.end, None) for sp in sent_spans]
        items.sort(key=lambda it: (it[0], it[1]))
        cur_start, cur_end, cur_groups = items[0][0], items[0][1], []
        if items[0][2] is not None:
            cur_groups.append(items[0][2])
        components: list[tuple[int, int, list[NounPhrase]]] = []
        for start, end, g in items[1:]:
            if start <= cur_end:
                cur_end = max(cur_end, end)
                if g is not None:
                    cur_groups.append(g)
            else:
                components.append((cur_start, cur_end, cur_groups))
                cur_start, cur_end = start, end
                cur_groups = [g] if g is not None else []
        components.append((cur_start, cur_end, cur_groups))
        for start, end, comp_groups in components:
            if comp_groups:
                lead = min(comp_groups, key=lambda g: (g.start, g.head_index))
                head = lead.head_index
                entity_derived = all(g.entity_derived for g in comp_groups)
            else:
                head = _elect_head(start, end, sentence, cfg)
                entity_derived = True
            merged.append(
                NounPhrase(
                    sentence_id=sid,
                    head_index=head,
                    start=start,
                    end=end,
                    entity_derived=entity_derived,
                )
            )
    return merged
