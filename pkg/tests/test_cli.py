import io
import json

import pytest

from npukr.cli import main

FIG3 = "fig3.conllu"
CORPUS = "corpus.conllu"


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_extract_writes_records(tmp_path, fixtures_dir, capsys):
    out = tmp_path / "preds.tsv"
    code, stdout, _ = run(
        ["extract", "--conllu", fixtures_dir / FIG3, "--out", out], capsys
    )
    assert code == 0
    assert "documents: 1" in stdout and "sentences: 1" in stdout and "groups: 3" in stdout
    rows = [line.split("\t") for line in out.read_text(encoding="utf-8").splitlines()]
    assert [r[:4] for r in rows] == [
        ["fig3", "fig3-1", "1", "7"],
        ["fig3", "fig3-1", "9", "12"],
        ["fig3", "fig3-1", "14", "15"],
    ]
    assert rows[1][4] == "10"
    assert rows[1][5] == "майбутній міністр Лілія Гриневич"


def test_extract_missing_file(tmp_path, capsys):
    code, _, err = run(
        ["extract", "--conllu", tmp_path / "nope.conllu", "--out", tmp_path / "o.tsv"],
        capsys,
    )
    assert code != 0
    assert "error" in err


def test_extract_malformed_conllu_reports_line(tmp_path, capsys):
    bad = tmp_path / "bad.conllu"
    bad.write_text("1\tслово\tслово\tNOUN\t_\t_\t0\n", encoding="utf-8")
    code, _, err = run(
        ["extract", "--conllu", bad, "--out", tmp_path / "o.tsv"], capsys
    )
    assert code != 0
    assert "line 1" in err


def test_extract_ud_ner_pipeline(tmp_path, fixtures_dir, capsys):
    out = tmp_path / "preds.tsv"
    code, stdout, _ = run(
        [
            "extract",
            "--conllu", fixtures_dir / "fig2.conllu",
            "--ner", fixtures_dir / "fig2.spans.tsv",
            "--gazetteer", fixtures_dir / "gazetteer",
            "--out", out,
        ],
        capsys,
    )
    assert code == 0
    assert "variant: UD+NER" in stdout
    text = out.read_text(encoding="utf-8")
    assert "засновник соціальної мережі Марк Цукерберг" in text


def test_extract_baseline_variant(tmp_path, fixtures_dir, capsys):
    out = tmp_path / "base.tsv"
    code, stdout, _ = run(
        ["extract", "--conllu", fixtures_dir / FIG3, "--out", out, "--variant", "baseline"],
        capsys,
    )
    assert code == 0
    rows = out.read_text(encoding="utf-8").splitlines()
    assert len(rows) == 5  # час, виборів, року, міністр, парламенту


def test_evaluate_prints_table(tmp_path, fixtures_dir, capsys):
    metrics_out = tmp_path / "metrics.json"
    code, stdout, _ = run(
        [
            "evaluate",
            "--conllu", fixtures_dir / CORPUS,
            "--gold", fixtures_dir / "corpus.gold.tsv",
            "--out", metrics_out,
        ],
        capsys,
    )
    assert code == 0
    assert "mode: full" in stdout and "mode: partial" in stdout
    for variant in ("UD+NER", "UD", "baseline"):
        assert variant in stdout
    records = [json.loads(line) for line in metrics_out.read_text().splitlines()]
    assert len(records) == 6


def test_evaluate_mode_restriction(fixtures_dir, capsys):
    code, stdout, _ = run(
        [
            "evaluate",
            "--conllu", fixtures_dir / CORPUS,
            "--gold", fixtures_dir / "corpus.gold.tsv",
            "--mode", "partial",
        ],
        capsys,
    )
    assert code == 0
    assert "mode: partial" in stdout
    assert "mode: full" not in stdout


def test_evaluate_empty_gold_zero_recall(tmp_path, fixtures_dir, capsys):
    gold = tmp_path / "empty.tsv"
    gold.write_text("", encoding="utf-8")
    code, stdout, _ = run(
        ["evaluate", "--conllu", fixtures_dir / FIG3, "--gold", gold], capsys
    )
    assert code == 0
    for line in stdout.splitlines():
        if line.startswith(("UD", "baseline")):
            assert " 0.000" in line  # recall column


def test_evaluate_doc_mismatch(tmp_path, fixtures_dir, capsys):
    gold = tmp_path / "gold.tsv"
    gold.write_text("other-doc\ts\t1\t1\n", encoding="utf-8")
    code, _, err = run(
        ["evaluate", "--conllu", fixtures_dir / FIG3, "--gold", gold], capsys
    )
    assert code != 0
    assert "other-doc" in err


@pytest.mark.parametrize("variant", ["UD", "UD+NER", "baseline"])
def test_pipeline_closure(tmp_path, fixtures_dir, capsys, variant):
    """extract -> use the output as gold -> evaluate gives P=R=F=1."""
    preds = tmp_path / "preds.tsv"
    args = [
        "extract",
        "--conllu", fixtures_dir / CORPUS,
        "--out", preds,
        "--variant", variant,
    ]
    if variant == "UD+NER":
        args += [
            "--ner", fixtures_dir / "corpus.spans.tsv",
            "--gazetteer", fixtures_dir / "gazetteer",
        ]
    code, _, _ = run(args, capsys)
    assert code == 0
    metrics_out = tmp_path / "m.json"
    ev_args = [
        "evaluate",
        "--conllu", fixtures_dir / CORPUS,
        "--gold", preds,
        "--out", metrics_out,
    ]
    if variant == "UD+NER":
        ev_args += [
            "--ner", fixtures_dir / "corpus.spans.tsv",
            "--gazetteer", fixtures_dir / "gazetteer",
        ]
    code, _, _ = run(ev_args, capsys)
    assert code == 0
    records = [json.loads(line) for line in metrics_out.read_text().splitlines()]
    for rec in records:
        if rec["variant"] == variant:
            assert rec["precision"] == 1.0
            assert rec["recall"] == 1.0
            assert rec["f1"] == 1.0


def test_extract_deterministic(tmp_path, fixtures_dir, capsys):
    out1, out2 = tmp_path / "a.tsv", tmp_path / "b.tsv"
    for out in (out1, out2):
        code, _, _ = run(
            ["extract", "--conllu", fixtures_dir / CORPUS, "--out", out], capsys
        )
        assert code == 0
    assert out1.read_text(encoding="utf-8") == out2.read_text(encoding="utf-8")
