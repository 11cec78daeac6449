from pathlib import Path

import pytest

from npukr import build_tree, read_documents

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def fig3_doc():
    return read_documents(FIXTURES / "fig3.conllu")[0]


@pytest.fixture(scope="session")
def fig2_doc():
    return read_documents(FIXTURES / "fig2.conllu")[0]


@pytest.fixture(scope="session")
def fig3_tree(fig3_doc):
    return build_tree(fig3_doc.sentences[0])


@pytest.fixture(scope="session")
def fig2_tree(fig2_doc):
    return build_tree(fig2_doc.sentences[0])


@pytest.fixture(scope="session")
def corpus():
    return read_documents(FIXTURES / "corpus.conllu")
