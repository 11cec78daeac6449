import io
import logging

import pytest
from hypothesis import given, strategies as st

from npukr import (
    EntitySpan,
    NerConfig,
    NounPhrase,
    Sentence,
    SpanRecordError,
    Token,
    build_tree,
    extract_sentence,
    filter_spans,
    load_external_spans,
    load_gazetteer,
    load_gazetteer_dir,
    match_gazetteer,
    merge_spans,
)


def tok(index, form, upos="NOUN", lemma=None, head=0, deprel="root", feats=None):
    return Token(index, form, lemma or form, upos, feats=feats or {}, head=head, deprel=deprel)


def sent(sid, *tokens):
    return Sentence(sid, tuple(tokens))


class TestGazetteerLoad:
    def test_person_line(self, tmp_path):
        path = tmp_path / "persons.txt"
        path.write_text("Гриневич Лілія\n", encoding="utf-8")
        gaz = load_gazetteer([("person", path)])
        assert gaz.entries["person"] == [(("гриневич", "лілія"), "Гриневич Лілія")]

    def test_duplicates_dropped(self, tmp_path):
        path = tmp_path / "p.txt"
        path.write_text("Марк Цукерберг\nМарк Цукерберг\n", encoding="utf-8")
        gaz = load_gazetteer([("person", path)])
        assert len(gaz.entries["person"]) == 1

    def test_three_categories(self, fixtures_dir):
        gaz = load_gazetteer_dir(fixtures_dir / "gazetteer")
        assert sorted(gaz.categories()) == ["cities", "countries", "persons"]
        assert len(gaz.entries["persons"]) == 3  # duplicate line collapsed

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(OSError, match="no-such-file"):
            load_gazetteer([("person", tmp_path / "no-such-file.txt")])

    def test_empty_file_accepted(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("", encoding="utf-8")
        gaz = load_gazetteer([("misc", path)])
        assert gaz.entries["misc"] == []


class TestGazetteerMatch:
    def make_gaz(self, tmp_path, **files):
        pairs = []
        for category, lines in files.items():
            path = tmp_path / f"{category}.txt"
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
            pairs.append((category, path))
        return load_gazetteer(pairs)

    def test_exact_two_token_hit(self, tmp_path):
        gaz = self.make_gaz(tmp_path, person=["Лілія Гриневич"])
        s = sent(
            "x",
            tok(1, "міністр"),
            tok(2, "Лілія", upos="PROPN", head=1, deprel="flat"),
            tok(3, "Гриневич", upos="PROPN", head=1, deprel="flat"),
        )
        spans = match_gazetteer(s, gaz)
        assert len(spans) == 1
        span = spans[0]
        assert (span.start, span.end, span.category) == (2, 3, "person")
        assert span.confidence == 1.0
        assert span.source == "gazetteer"

    def test_lemma_match(self, tmp_path):
        gaz = self.make_gaz(tmp_path, country=["Україна"])
        s = sent("x", tok(1, "України", lemma="Україна", upos="PROPN"))
        spans = match_gazetteer(s, gaz)
        assert [(sp.start, sp.end, sp.category) for sp in spans] == [(1, 1, "country")]

    def test_no_hit(self, tmp_path):
        gaz = self.make_gaz(tmp_path, person=["Лілія Гриневич"])
        s = sent("x", tok(1, "парламент"))
        assert match_gazetteer(s, gaz) == []

    def test_longest_match_suppresses_inner(self, tmp_path):
        gaz = self.make_gaz(tmp_path, org=["Банк", "Національний Банк України"])
        s = sent(
            "x",
            tok(1, "Національний", upos="ADJ"),
            tok(2, "Банк"),
            tok(3, "України", lemma="Україна", upos="PROPN"),
        )
        spans = match_gazetteer(s, gaz)
        assert [(sp.start, sp.end) for sp in spans] == [(1, 3)]

    def test_case_insensitive(self, tmp_path):
        gaz = self.make_gaz(tmp_path, city=["КИЇВ"])
        s = sent("x", tok(1, "київ"))
        assert len(match_gazetteer(s, gaz)) == 1


class TestExternalSpans:
    def test_record_mapping(self):
        spans = load_external_spans(io.StringIO("d1\ts1\t7\t8\tperson\t0.93\n"))
        assert spans == [
            EntitySpan(
                sentence_id="s1", start=7, end=8, category="person",
                confidence=0.93, source="external", doc_id="d1",
            )
        ]

    def test_confidence_out_of_range(self):
        with pytest.raises(SpanRecordError, match="line 1"):
            load_external_spans(io.StringIO("d1\ts1\t7\t8\tperson\t1.7\n"))

    def test_empty_file(self):
        assert load_external_spans(io.StringIO("")) == []

    def test_bad_field_count(self):
        with pytest.raises(SpanRecordError, match="6 fields"):
            load_external_spans(io.StringIO("d1\ts1\t7\t8\tperson\n"))

    def test_non_numeric_confidence(self):
        with pytest.raises(SpanRecordError, match="confidence"):
            load_external_spans(io.StringIO("d1\ts1\t7\t8\tperson\thigh\n"))

    def test_comments_and_blanks_skipped(self):
        text = "# header\n\nd1\ts1\t1\t1\tmisc\t0.9\n"
        assert len(load_external_spans(io.StringIO(text))) == 1


class TestFilterSpans:
    def span(self, conf):
        return EntitySpan(sentence_id="s", start=1, end=1, category="misc", confidence=conf)

    def test_kept_at_093(self):
        assert filter_spans([self.span(0.93)]) == [self.span(0.93)]

    def test_dropped_below_threshold(self):
        assert filter_spans([self.span(0.79)]) == []

    def test_inclusive_boundary(self):
        assert filter_spans([self.span(0.8)]) == [self.span(0.8)]

    def test_zero_threshold_is_identity(self):
        spans = [self.span(0.1), self.span(0.9)]
        assert filter_spans(spans, NerConfig(confidence_threshold=0.0)) == spans

    def test_threshold_one_keeps_gazetteer_hits(self):
        spans = [self.span(1.0), self.span(0.999)]
        assert filter_spans(spans, NerConfig(confidence_threshold=1.0)) == [self.span(1.0)]


def zuckerberg_sentence():
    return sent(
        "s1",
        tok(1, "засновник", head=0, deprel="root"),
        tok(2, "соціальної", upos="ADJ", head=3, deprel="amod"),
        tok(3, "мережі", head=1, deprel="nmod"),
        tok(4, "Марк", upos="PROPN", head=1, deprel="flat"),
        tok(5, "Цукерберг", upos="VERB", head=1, deprel="acl", feats={"VerbForm": "Fin"}),
    )


class TestMergeSpans:
    def test_recovers_mistagged_name(self):
        s = zuckerberg_sentence()
        groups = extract_sentence(build_tree(s))
        assert [(g.start, g.end) for g in groups] == [(1, 4)]
        span = EntitySpan(sentence_id="s1", start=4, end=5, category="person", confidence=0.93)
        merged = merge_spans(groups, [span], [s])
        assert [(g.start, g.end, g.head_index) for g in merged] == [(1, 5, 1)]
        assert merged[0].surface(s) == "засновник соціальної мережі Марк Цукерберг"
        assert not merged[0].entity_derived

    def test_disjoint_span_becomes_new_phrase(self):
        s = sent("s1", tok(1, "а"), tok(2, "б", upos="VERB", head=1, deprel="acl"),
                 tok(3, "в", upos="PROPN", head=1, deprel="appos"))
        groups = [NounPhrase("s1", 1, 1, 1)]
        span = EntitySpan(sentence_id="s1", start=3, end=3, category="person", confidence=0.9)
        merged = merge_spans(groups, [span], [s])
        assert [(g.start, g.end) for g in merged] == [(1, 1), (3, 3)]
        assert merged[0] == groups[0]
        assert merged[1].entity_derived
        assert merged[1].head_index == 3  # PROPN: elected as head

    def test_entity_only_head_falls_back_to_first_token(self):
        s = sent("s1", tok(1, "а", upos="VERB"), tok(2, "б", upos="ADJ", head=1, deprel="amod"))
        span = EntitySpan(sentence_id="s1", start=1, end=2, category="misc", confidence=0.9)
        merged = merge_spans([], [span], [s])
        assert merged[0].head_index == 1

    def test_span_inside_group_is_identity(self):
        s = zuckerberg_sentence()
        groups = extract_sentence(build_tree(s))
        span = EntitySpan(sentence_id="s1", start=2, end=3, category="misc", confidence=0.9)
        assert merge_spans(groups, [span], [s]) == groups

    def test_empty_span_list_is_identity(self, fig2_tree, fig2_doc):
        groups = extract_sentence(fig2_tree)
        assert merge_spans(groups, [], fig2_doc.sentences) == groups

    def test_idempotent(self):
        s = zuckerberg_sentence()
        groups = extract_sentence(build_tree(s))
        spans = [EntitySpan(sentence_id="s1", start=4, end=5, category="person", confidence=0.93)]
        once = merge_spans(groups, spans, [s])
        twice = merge_spans(once, spans, [s])
        assert once == twice

    def test_bridges_groups_through_one_span(self):
        groups = [NounPhrase("s1", 1, 1, 2), NounPhrase("s1", 4, 4, 5)]
        s = sent("s1", *[tok(i, f"w{i}", head=0 if i == 1 else 1, deprel="nmod" if i > 1 else "root") for i in range(1, 6)])
        span = EntitySpan(sentence_id="s1", start=2, end=4, category="misc", confidence=0.9)
        merged = merge_spans(groups, [span], [s])
        assert [(g.start, g.end, g.head_index) for g in merged] == [(1, 5, 1)]

    def test_out_of_range_span_skipped_with_warning(self, caplog):
        s = sent("s1", tok(1, "а"))
        groups = [NounPhrase("s1", 1, 1, 1)]
        span = EntitySpan(sentence_id="s1", start=2, end=3, category="misc", confidence=0.9)
        with caplog.at_level(logging.WARNING, logger="npukr.entities"):
            merged = merge_spans(groups, [span], [s])
        assert merged == groups
        assert "outside" in caplog.text

    def test_unknown_sentence_skipped_with_warning(self, caplog):
        s = sent("s1", tok(1, "а"))
        span = EntitySpan(sentence_id="zz", start=1, end=1, category="misc", confidence=0.9)
        with caplog.at_level(logging.WARNING, logger="npukr.entities"):
            assert merge_spans([], [span], [s]) == []
        assert "unknown sentence" in caplog.text

    def test_membership_never_shrinks(self, fig2_tree, fig2_doc):
        groups = extract_sentence(fig2_tree)
        spans = [
            EntitySpan(sentence_id="fig2-1", start=13, end=14, category="person", confidence=0.93),
            EntitySpan(sentence_id="fig2-1", start=6, end=9, category="misc", confidence=0.9),
        ]
        merged = merge_spans(groups, spans, fig2_doc.sentences)
        merged_tokens = set().union(*(g.member_indices for g in merged))
        for g in groups:
            assert g.member_indices <= merged_tokens


class TestEntitySpanValidation:
    def test_start_after_end(self):
        with pytest.raises(ValueError):
            EntitySpan(sentence_id="s", start=3, end=2, category="x", confidence=0.5)

    def test_confidence_range(self):
        with pytest.raises(ValueError):
            EntitySpan(sentence_id="s", start=1, end=1, category="x", confidence=-0.1)

    def test_threshold_range(self):
        with pytest.raises(ValueError):
            NerConfig(confidence_threshold=1.5)


@given(
    st.lists(
        st.tuples(st.integers(1, 12), st.integers(0, 3)).map(
            lambda t: (t[0], t[0] + t[1])
        ),
        max_size=5,
    )
)
def test_merge_idempotent_on_random_spans(raw_spans):
    s = sent(
        "s1",
        *[tok(i, f"w{i}", head=0 if i == 1 else 1, deprel="root" if i == 1 else "nmod") for i in range(1, 16)],
    )
    groups = [NounPhrase("s1", 2, 2, 3), NounPhrase("s1", 7, 6, 8)]
    spans = [
        EntitySpan(sentence_id="s1", start=a, end=b, category="misc", confidence=0.9)
        for a, b in raw_spans
    ]
    once = merge_spans(groups, spans, [s])
    twice = merge_spans(once, spans, [s])
    assert once == twice
    # non-overlap and contiguity hold after merging
    covered = set()
    for g in once:
        span = set(range(g.start, g.end + 1))
        assert not (covered & span)
        covered |= span
