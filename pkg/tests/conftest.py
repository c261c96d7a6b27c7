"""Shared fixtures: bundled tiny data and small prebuilt corpus objects."""

from importlib import resources

import numpy as np
import pytest

import extremal_glove as eg


@pytest.fixture(scope="session")
def tiny_corpus_path() -> str:
    return str(resources.files("extremal_glove") / "data" / "tiny_corpus.txt")


@pytest.fixture(scope="session")
def tiny_questions_path() -> str:
    return str(resources.files("extremal_glove") / "data" / "tiny_questions.txt")


@pytest.fixture(scope="session")
def tiny_tokens(tiny_corpus_path) -> list:
    return list(eg.tokens_from_file(tiny_corpus_path))


@pytest.fixture(scope="session")
def tiny_vocab(tiny_tokens) -> eg.VocabTable:
    return eg.build_vocab(tiny_tokens, min_count=5)


@pytest.fixture(scope="session")
def tiny_records(tiny_tokens, tiny_vocab) -> eg.CoocRecords:
    return eg.count_cooccurrences(tiny_tokens, tiny_vocab, window=15)


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(42)
