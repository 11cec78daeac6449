"""Noun phrase extraction over dependency trees.

A token may head a group when its POS admits it (nouns, pronouns, proper
names, or foreign-marked unknowns). Groups grow outward from the head over
its children, nearest-first per side, absorbing a child together with the
span its own subtree assembles, as long as the child is admissible and the
result stays contiguous. The first rejected child on a side blocks that
side; everything beyond it is treated as independent material.

The span-assembly walk is the hot loop and runs on a compiled kernel when
available (see ``_backend``); the encoded form consumed by both kernels is
produced here from the public predicates, which stay the single source of
the attachment semantics.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import _backend
from .conllu import DependencyTree, Sentence, Token

DEFAULT_HEAD_POS = frozenset({"NOUN", "PRON", "PROPN", "X"})
DEFAULT_MEMBER_POS = frozenset(
    {"ADJ", "ADV", "ADP", "DET", "AUX", "NUM", "NOUN", "PROPN", "X", "PRON", "VERB", "PUNCT"}
)
DEFAULT_HEAD_ATTACH_RELATIONS = frozenset({"flat", "nmod"})

# Multiword-expression relations: never a license for attaching a head-capable
# child, no matter how head_attach_relations is overridden.
_MWE_RELATIONS = frozenset({"fixed", "compound"})


@dataclass(frozen=True)
class ExtractionConfig:
    head_pos: frozenset = DEFAULT_HEAD_POS
    require_foreign_for_x: bool = True
    member_pos: frozenset = DEFAULT_MEMBER_POS
    head_attach_relations: frozenset = DEFAULT_HEAD_ATTACH_RELATIONS
    emit_nested: bool = False
    trim_boundary_punct: bool = True

    def __post_init__(self) -> None:
        extra = set(self.head_pos) - (set(self.member_pos) | {"X"})
        if extra:
            raise ValueError(
                f"head_pos labels {sorted(extra)} missing from member_pos"
            )


DEFAULT_CONFIG = ExtractionConfig()


@dataclass(frozen=True)
class NounPhrase:
    """Contiguous token span [start, end] with a designated head token.

    ``entity_derived`` marks phrases that exist only because an entity span
    was merged in, with no extraction-rule head of their own.
    """

    sentence_id: str
    head_index: int
    start: int
    end: int
    entity_derived: bool = False

    def __post_init__(self) -> None:
        if not (self.start <= self.head_index <= self.end):
            raise ValueError(
                f"head {self.head_index} outside span [{self.start}, {self.end}]"
            )

    @property
    def member_indices(self) -> frozenset:
        return frozenset(range(self.start, self.end + 1))

    def surface(self, sentence: Sentence) -> str:
        return " ".join(t.form for t in sentence.tokens[self.start - 1 : self.end])


def is_potential_head(token: Token, cfg: ExtractionConfig = DEFAULT_CONFIG) -> bool:
    """POS-based head candidacy; X only counts when marked Foreign=Yes."""
    if token.upos not in cfg.head_pos:
        return False
    if token.upos == "X" and cfg.require_foreign_for_x:
        return token.feats.get("Foreign") == "Yes"
    return True


def may_join(
    child: Token,
    head: Token,
    tree: DependencyTree,
    cfg: ExtractionConfig = DEFAULT_CONFIG,
) -> bool:
    """Whether a direct child may be absorbed into its parent's group.

    Verbs join only as infinitives. A child that could head a group of its
    own additionally needs an attaching relation (never fixed/compound) and
    must not govern any token outside the member POS set.
    """
    if child.upos not in cfg.member_pos:
        return False
    if child.upos == "VERB" and child.feats.get("VerbForm") != "Inf":
        return False
    if is_potential_head(child, cfg):
        if child.deprel not in cfg.head_attach_relations:
            return False
        if child.deprel in _MWE_RELATIONS:
            return False
        for grandchild in tree.children[child.index]:
            if tree.sentence.token(grandchild).upos not in cfg.member_pos:
                return False
    return True


def encode_tree(tree: DependencyTree, cfg: ExtractionConfig = DEFAULT_CONFIG):
    """Flatten a tree into the buffers both span kernels consume.

    Returns ``(n, root, child_start, child_list, can_absorb, is_head)``:
    CSR child lists over 1-based token indices (``child_list`` padded by one
    slot so it is never empty) plus per-token predicate bytes.
    """
    tokens = tree.sentence.tokens
    n = len(tokens)
    child_start = array("i", [0] * (n + 2))
    child_list = array("i")
    for i in range(1, n + 1):
        kids = tree.children[i]
        child_start[i + 1] = child_start[i] + len(kids)
        child_list.extend(kids)
    child_list.append(0)  # pad: keeps the buffer non-empty for n == 1
    can_absorb = bytearray(n + 1)
    is_head = bytearray(n + 1)
    for tok in tokens:
        if is_potential_head(tok, cfg):
            is_head[tok.index] = 1
        if tok.head != 0 and may_join(tok, tree.sentence.token(tok.head), tree, cfg):
            can_absorb[tok.index] = 1
    return n, tree.root, child_start, child_list, bytes(can_absorb), bytes(is_head)


def _trim_punct(start: int, end: int, tokens: Sequence[Token]) -> tuple[int, int]:
    while start < end and tokens[start - 1].upos == "PUNCT":
        start += 1
    while end > start and tokens[end - 1].upos == "PUNCT":
        end -= 1
    return start, end


def extract_sentence(
    tree: DependencyTree, cfg: ExtractionConfig = DEFAULT_CONFIG
) -> list[NounPhrase]:
    """All noun phrase spans of one sentence, sorted by start index.

    With ``emit_nested`` off only maximal groups are produced, so the output
    spans are pairwise disjoint.
    """
    n, root, child_start, child_list, can_absorb, is_head = encode_tree(tree, cfg)
    if n == 0:
        return []
    raw = _backend.extract_spans(
        n, root, child_start, child_list, can_absorb, is_head, cfg.emit_nested
    )
    tokens = tree.sentence.tokens
    sid = tree.sentence.sentence_id
    phrases = []
    for head, start, end in raw:
        if cfg.trim_boundary_punct:
            start, end = _trim_punct(start, end, tokens)
        phrases.append(NounPhrase(sentence_id=sid, head_index=head, start=start, end=end))
    phrases.sort(key=lambda p: (p.start, p.end, p.head_index))
    return phrases


def extract_document(
    trees: Iterable[DependencyTree], cfg: ExtractionConfig = DEFAULT_CONFIG
) -> list[NounPhrase]:
    """Per-sentence extraction concatenated in input order."""
    phrases: list[NounPhrase] = []
    for tree in trees:
        phrases.extend(extract_sentence(tree, cfg))
    return phrases


def kernel_backend() -> str:
    """Name of the span kernel in use: ``compiled`` or ``python``."""
    return _backend.backend_name()
