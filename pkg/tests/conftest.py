from __future__ import annotations

from pathlib import Path

import pytest

import splforge as sf

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def webspl() -> sf.FeatureModel:
    return sf.reference_model()


@pytest.fixture(scope="session")
def fixtures() -> Path:
    return FIXTURES
