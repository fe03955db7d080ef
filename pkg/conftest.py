import os
import sys

import pytest

# Add current directory to path so we can import src
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from src.config import reset_settings
from src.padic import FieldSpec
from src.tate import TateCurve

ROOT = os.path.dirname(os.path.abspath(__file__))
SCENARIOS = os.path.join(ROOT, "scenarios")


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    """Every test starts from default settings, whatever the shell exports."""
    for name in list(os.environ):
        if name.startswith("REGULATOR_"):
            monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def q5():
    return FieldSpec.qp(5, 40)


@pytest.fixture
def curve125(q5):
    return TateCurve(q5, "5^3")


@pytest.fixture
def curve25(q5):
    return TateCurve(q5, "25")


@pytest.fixture
def q5_zeta3():
    """Q5(zeta_3): the unramified quadratic extension, t^2 + t + 1."""
    return FieldSpec(p=5, poly=(1, 1, 1), precision=30)


@pytest.fixture
def scenario_dir():
    return SCENARIOS
