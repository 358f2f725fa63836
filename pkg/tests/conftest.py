from pathlib import Path

import pytest

from seoq.model import ModelParameters
from seoq.segments import ContainerSpec, segments_for

ROOT = Path(__file__).resolve().parent.parent
REFERENCE_CFG = ROOT / "reference.cfg"

REFERENCE = dict(
    A=1000.0, c=25.0, h=8.0, a=80.0, b=4.0, d=3000.0, alpha=0.1, D=5000.0,
    beta=30.0, v=50.0, gamma=5.0, gamma0=20.0, theta=0.1, epsilon=200.0,
    g=3.0, Ce=10.0, Cp=2.0, r=0.004, l=30.0,
)

# everything except ordering and holding switched off
HARRIS = dict(REFERENCE, b=0.0, a=0.0, beta=0.0, gamma=0.0, gamma0=0.0,
              epsilon=0.0, g=0.0, Ce=0.0, Cp=0.0, l=0.0, c=0.0)


@pytest.fixture
def params():
    return ModelParameters(**REFERENCE)


@pytest.fixture
def segments():
    return segments_for([ContainerSpec(300, 2), ContainerSpec(600, 2)])


@pytest.fixture
def harris():
    return ModelParameters(**HARRIS)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
