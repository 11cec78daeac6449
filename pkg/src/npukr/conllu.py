"""CoNLL-U parsing and dependency tree construction.

The 10-column format: ID FORM LEMMA UPOS XPOS FEATS HEAD DEPREL DEPS MISC,
tab-separated, UTF-8, ``_`` for empty fields, blank line terminates a
sentence, ``#`` lines are comments.
"""

from __future__ import annotations

import logging
import re
from collections import deque
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Mapping

logger = logging.getLogger(__name__)

_RANGE_ID = re.compile(r"^\d+-\d+$")
_EMPTY_NODE_ID = re.compile(r"^\d+\.\d+$")
_INT_ID = re.compile(r"^\d+$")


class ConlluParseError(ValueError):
    """Malformed CoNLL-U input (bad column count, bad token id, bad FEATS)."""


class TreeStructureError(ValueError):
    """A sentence whose head links do not form a single rooted tree."""


@dataclass(frozen=True)
class Token:
    """One syntactic word of a sentence.

    ``head`` is the 1-based index of the governing token, 0 for the root.
    XPOS, DEPS and MISC are carried along untouched so a parsed sentence can
    be serialized back without loss.
    """

    index: int
    form: str
    lemma: str
    upos: str
    feats: Mapping[str, str] = field(default_factory=dict)
    head: int = 0
    deprel: str = "_"
    xpos: str = "_"
    deps: str = "_"
    misc: str = "_"


@dataclass(frozen=True)
class Sentence:
    sentence_id: str
    tokens: tuple[Token, ...]

    def __len__(self) -> int:
        return len(self.tokens)

    def token(self, index: int) -> Token:
        """Token by its 1-based CoNLL-U index."""
        return self.tokens[index - 1]


@dataclass(frozen=True)
class Document:
    """Sentences grouped under one ``# newdoc id`` (or one input file)."""

    doc_id: str
    sentences: tuple[Sentence, ...]


@dataclass(frozen=True)
class DependencyTree:
    """Rooted tree over a sentence with per-token ordered child lists.

    ``children[i]`` holds the child indices of token ``i`` sorted ascending
    by text position; slot 0 is unused.
    """

    sentence: Sentence
    root: int
    children: tuple[tuple[int, ...], ...]


def _iter_lines(source: str | IO[str] | Iterable[str]) -> Iterator[str]:
    if isinstance(source, str):
        yield from source.splitlines()
    elif hasattr(source, "read"):
        for line in source:
            yield line.rstrip("\n\r")
    else:
        for line in source:
            yield line.rstrip("\n\r")


def parse_feats(raw: str, line_no: int) -> dict[str, str]:
    if raw == "_" or raw == "":
        return {}
    feats: dict[str, str] = {}
    for pair in raw.split("|"):
        name, sep, value = pair.partition("=")
        if not sep or not name:
            raise ConlluParseError(f"line {line_no}: malformed FEATS pair {pair!r}")
        feats[name] = value
    return feats


def _finish_sentence(
    rows: list[tuple[int, Token]], sent_id: str, first_line: int
) -> Sentence:
    tokens = tuple(tok for _, tok in rows)
    for expected, (line_no, tok) in enumerate(rows, start=1):
        if tok.index != expected:
            raise ConlluParseError(
                f"line {line_no}: token id {tok.index} out of sequence "
                f"(expected {expected})"
            )
    n = len(tokens)
    for line_no, tok in rows:
        if tok.head < 0 or tok.head > n:
            raise TreeStructureError(
                f"sentence {sent_id!r}: HEAD {tok.head} of token {tok.index} "
                f"does not exist (sentence has {n} tokens)"
            )
    if n == 0:
        raise ConlluParseError(
            f"line {first_line}: sentence block contains no word lines"
        )
    return Sentence(sentence_id=sent_id, tokens=tokens)


def parse_documents(
    source: str | IO[str] | Iterable[str], default_doc_id: str = "doc"
) -> list[Document]:
    """Parse a CoNLL-U stream into documents.

    ``# newdoc id = X`` comments open a new document; without them the whole
    stream forms one document named ``default_doc_id``. Sentence ids come
    from ``# sent_id`` comments, otherwise ``<doc_id>:<ordinal>``.
    Multiword-token range lines and empty-node lines carry no syntax and are
    skipped.
    """
    docs: list[tuple[str, list[Sentence]]] = []
    current_doc = default_doc_id
    current_sents: list[Sentence] = []
    rows: list[tuple[int, Token]] = []
    sent_id: str | None = None
    block_start = 0

    def close_doc() -> None:
        nonlocal current_sents
        if current_sents or not docs:
            docs.append((current_doc, current_sents))
        current_sents = []

    def close_block() -> None:
        nonlocal rows, sent_id
        if rows:
            ordinal = len(current_sents) + 1
            sid = sent_id if sent_id is not None else f"{current_doc}:{ordinal}"
            current_sents.append(_finish_sentence(rows, sid, block_start))
        rows = []
        sent_id = None

    for line_no, line in enumerate(_iter_lines(source), start=1):
        if line_no == 1:
            line = line.lstrip("﻿")
        if not line.strip():
            close_block()
            continue
        if line.startswith("#"):
            comment = line[1:].strip()
            if comment.startswith("newdoc"):
                close_block()
                if current_sents:
                    close_doc()
                _, sep, value = comment.partition("=")
                current_doc = value.strip() if sep else default_doc_id
                continue
            name, sep, value = comment.partition("=")
            if sep and name.strip() == "sent_id":
                sent_id = value.strip()
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ConlluParseError(
                f"line {line_no}: expected 10 tab-separated columns, got {len(cols)}"
            )
        tok_id = cols[0]
        if _RANGE_ID.match(tok_id) or _EMPTY_NODE_ID.match(tok_id):
            continue
        if not _INT_ID.match(tok_id):
            raise ConlluParseError(f"line {line_no}: bad token id {tok_id!r}")
        if not _INT_ID.match(cols[6]):
            raise ConlluParseError(f"line {line_no}: bad HEAD value {cols[6]!r}")
        if not rows:
            block_start = line_no
        rows.append(
            (
                line_no,
                Token(
                    index=int(tok_id),
                    form=cols[1],
                    lemma=cols[2],
                    upos=cols[3],
                    xpos=cols[4],
                    feats=parse_feats(cols[5], line_no),
                    head=int(cols[6]),
                    deprel=cols[7],
                    deps=cols[8],
                    misc=cols[9],
                ),
            )
        )
    close_block()
    close_doc()
    return [Document(doc_id=did, sentences=tuple(sents)) for did, sents in docs]


def parse_conllu(
    source: str | IO[str] | Iterable[str], doc_id: str = "doc"
) -> list[Sentence]:
    """Parse a CoNLL-U stream into a flat sentence list."""
    sentences: list[Sentence] = []
    for doc in parse_documents(source, default_doc_id=doc_id):
        sentences.extend(doc.sentences)
    return sentences


def read_documents(path, doc_id: str | None = None) -> list[Document]:
    """Parse one CoNLL-U file; the file stem names the default document."""
    import pathlib

    p = pathlib.Path(path)
    with open(p, encoding="utf-8") as fh:
        return parse_documents(fh, default_doc_id=doc_id or p.stem)


def _format_feats(feats: Mapping[str, str]) -> str:
    if not feats:
        return "_"
    return "|".join(f"{k}={v}" for k, v in sorted(feats.items(), key=lambda kv: kv[0].lower()))


def to_conllu(sentence: Sentence) -> str:
    """Serialize a sentence back to CoNLL-U columns (sorted FEATS order)."""
    lines = [f"# sent_id = {sentence.sentence_id}"]
    for t in sentence.tokens:
        lines.append(
            "\t".join(
                (
                    str(t.index),
                    t.form,
                    t.lemma,
                    t.upos,
                    t.xpos,
                    _format_feats(t.feats),
                    str(t.head),
                    t.deprel,
                    t.deps,
                    t.misc,
                )
            )
        )
    return "\n".join(lines) + "\n"


def build_tree(sentence: Sentence) -> DependencyTree:
    """Rebuild the dependency tree of a sentence.

    Raises TreeStructureError when the head links do not form a single tree
    (no root, several roots, or a cycle).
    """
    n = len(sentence.tokens)
    roots = [t.index for t in sentence.tokens if t.head == 0]
    if not roots:
        raise TreeStructureError(f"sentence {sentence.sentence_id!r}: no root token")
    if len(roots) > 1:
        raise TreeStructureError(
            f"sentence {sentence.sentence_id!r}: multiple roots {roots}"
        )
    kids: list[list[int]] = [[] for _ in range(n + 1)]
    for t in sentence.tokens:
        if t.head == 0:
            continue
        if not (1 <= t.head <= n):
            raise TreeStructureError(
                f"sentence {sentence.sentence_id!r}: HEAD {t.head} of token "
                f"{t.index} does not exist"
            )
        kids[t.head].append(t.index)
    root = roots[0]
    seen = 0
    queue = deque([root])
    visited = [False] * (n + 1)
    visited[root] = True
    while queue:
        x = queue.popleft()
        seen += 1
        for c in kids[x]:
            if not visited[c]:
                visited[c] = True
                queue.append(c)
    if seen != n:
        raise TreeStructureError(
            f"sentence {sentence.sentence_id!r}: cycle detected "
            f"({n - seen} tokens unreachable from root)"
        )
    return DependencyTree(
        sentence=sentence,
        root=root,
        children=tuple([()] + [tuple(k) for k in kids[1:]]),
    )


def document_trees(doc: Document) -> list[DependencyTree]:
    """Trees for a document; malformed sentences are skipped with a warning."""
    trees = []
    for sent in doc.sentences:
        try:
            trees.append(build_tree(sent))
        except TreeStructureError as exc:
            logger.warning("skipping sentence: %s", exc)
    return trees
