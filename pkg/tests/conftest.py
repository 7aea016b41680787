import pytest

from statviz.analyzer import Tagger
from statviz.corpus import load_corpus
from statviz.crf import TaggerModel
from statviz.embeddings import load_embeddings
from statviz.resources import data_path


@pytest.fixture(scope="session")
def embeddings():
    return load_embeddings(data_path("embeddings_50d.txt"))


@pytest.fixture(scope="session")
def bundled_model():
    return TaggerModel.load(data_path("model.txt"))


@pytest.fixture(scope="session")
def tagger(bundled_model, embeddings):
    return Tagger(bundled_model, embeddings)


@pytest.fixture(scope="session")
def corpus():
    return load_corpus(data_path("corpus.conll"))


@pytest.fixture(scope="session")
def pipeline():
    from statviz.app import Config, Pipeline

    return Pipeline(Config.default())
