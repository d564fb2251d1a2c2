import json
from importlib import resources
from pathlib import Path

import pytest

from portsec import archmodel, rules


def corpus_path(name: str) -> Path:
    return Path(str(resources.files("portsec").joinpath(f"corpus/{name}")))


def schema_path(name: str) -> Path:
    return Path(str(resources.files("portsec").joinpath(f"schemas/{name}")))


def load_schema(name: str) -> dict:
    return json.loads(schema_path(name).read_text())


@pytest.fixture(scope="session")
def vulnerable_model() -> archmodel.SystemModel:
    return archmodel.load_model(corpus_path("tos-pcs-model.json"))


@pytest.fixture(scope="session")
def hardened_model() -> archmodel.SystemModel:
    return archmodel.load_model(corpus_path("tos-pcs-hardened.json"))


@pytest.fixture(scope="session")
def advisories() -> rules.AdvisoryCatalog:
    return rules.AdvisoryCatalog.load(corpus_path("advisories.json"))
