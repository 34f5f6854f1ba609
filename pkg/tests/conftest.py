import json
from pathlib import Path

import pytest

from persua.corpus import load_corpus
from persua.features import HashingProvider
from persua.service import AnalysisEngine, load_models

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_paths():
    return {
        "corpus": FIXTURES / "mini_corpus.jsonl",
        "manifest": FIXTURES / "manifest.json",
        "models": FIXTURES / "models",
        "draft": FIXTURES / "draft.txt",
        "revised": FIXTURES / "revised.txt",
        "goldens": FIXTURES / "goldens",
    }


@pytest.fixture(scope="session")
def mini_corpus(fixture_paths):
    return load_corpus(str(fixture_paths["corpus"]))


@pytest.fixture(scope="session")
def manifest(fixture_paths):
    return json.loads(fixture_paths["manifest"].read_text())


@pytest.fixture(scope="session")
def fixture_provider(fixture_paths):
    cfg = json.loads((fixture_paths["models"] / "provider.json").read_text())
    return HashingProvider(dimension=cfg["dimension"], seed=cfg["seed"])


@pytest.fixture(scope="session")
def fixture_bundle(fixture_paths):
    return load_models(str(fixture_paths["models"]))


@pytest.fixture(scope="session")
def engine(mini_corpus, fixture_bundle, fixture_provider):
    return AnalysisEngine(mini_corpus, fixture_bundle, fixture_provider)


def load_golden(fixture_paths, name):
    return json.loads((fixture_paths["goldens"] / f"{name}.json").read_text())
