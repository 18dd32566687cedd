"""Shared fixtures: the bundled demo corpus at several processing stages."""

from importlib import resources
from pathlib import Path

import pytest

from philotope.corpus import (balance, load_corpus, load_stopwords,
                              preprocess)

POETS = ("quevedo", "lope", "gongora")


def demo_corpus_root() -> Path:
    return Path(str(resources.files("philotope") / "data" / "demo_corpus"))


@pytest.fixture(scope="session")
def demo_root() -> Path:
    return demo_corpus_root()


@pytest.fixture(scope="session")
def demo_corpus(demo_root):
    return balance(load_corpus(demo_root, list(POETS)), 5)


@pytest.fixture(scope="session")
def processed(demo_corpus):
    return preprocess(demo_corpus, load_stopwords())
