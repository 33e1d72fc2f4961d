import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SAMPLE_POSET_FILE = Path(__file__).resolve().parents[1] / "src" / "enriched_qsym" / "data" / "sample_poset.json"


@pytest.fixture
def sample_poset_file():
    return SAMPLE_POSET_FILE
