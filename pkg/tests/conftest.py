from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from supertrop.formats import parse_carrier

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load(name):
    return parse_carrier((FIXTURES / name).read_text(encoding="utf-8"))


@pytest.fixture
def fixture_dir():
    return FIXTURES
