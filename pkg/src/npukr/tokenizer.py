"""Rule-based tokenizer backing the annotation service.

Whitespace plus punctuation splitting; punctuation marks stay as tokens.
Apostrophes and hyphens inside a word (м'яч, будь-хто) do not split it.
"""

from __future__ import annotations

import re

_WORD = re.compile(r"\w+(?:['’ʼ`-]\w+)*|[^\w\s]", re.UNICODE)
_SENT_BOUNDARY = re.compile(r"(?<=[.!?…])\s+")


def split_sentences(text: str) -> list[str]:
    sentences: list[str] = []
    for block in text.splitlines():
        block = block.strip()
        if not block:
            continue
        for part in _SENT_BOUNDARY.split(block):
            part = part.strip()
            if part:
                sentences.append(part)
    return sentences


def tokenize_sentence(sentence: str) -> list[str]:
    return _WORD.findall(sentence)


def tokenize(text: str) -> list[list[str]]:
    """Sentences as token lists; empty sentences are dropped."""
    return [toks for s in split_sentences(text) if (toks := tokenize_sentence(s))]
