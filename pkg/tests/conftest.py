import json
from pathlib import Path

import pytest

from fleetintent.config import ServiceConfig
from fleetintent.fleet import Fixture, load_fleet, parse_cmapss

REPO_ROOT = Path(__file__).resolve().parents[1]
DATA_PATH = REPO_ROOT / "data" / "cmapss" / "train_FD001.txt"
FIXTURE_PATH = REPO_ROOT / "data" / "fixtures" / "reference_fleet.json"

GOLDEN_PROMPT = (
    "I need to maintain all engines working well according to their predicted RUL, "
    "avoiding unexpected stops, please make a consolidated predictive maintenance "
    "plan in a table format."
)


@pytest.fixture(scope="session")
def all_records():
    return parse_cmapss(DATA_PATH)


@pytest.fixture(scope="session")
def fixture_doc():
    return json.loads(FIXTURE_PATH.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def fixture_ruls(fixture_doc):
    return {int(k): int(v) for k, v in fixture_doc["ruls"].items()}


@pytest.fixture
def reference_fixture():
    return Fixture.from_file(FIXTURE_PATH)


@pytest.fixture
def reference_store(all_records, reference_fixture):
    """Fresh 20-engine fleet per test; mutations never leak."""
    return load_fleet(all_records, engine_limit=20, observation=reference_fixture)


def make_config(**overrides) -> ServiceConfig:
    defaults = dict(data_path=DATA_PATH, fixture_path=FIXTURE_PATH, engine_limit=20)
    defaults.update(overrides)
    return ServiceConfig(**defaults)


@pytest.fixture
def service_config():
    return make_config()
