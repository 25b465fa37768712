import sys
from pathlib import Path

import pytest

SRC = Path(__file__).resolve().parents[1] / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from filtered_derived.scenarios import cone_scenario, nilpotent_scenario, plane_scenario, principal_scenario  # noqa: E402


@pytest.fixture(scope="session")
def plane():
    """QQ[x, y] blown up at the origin."""
    return plane_scenario("QQ")


@pytest.fixture(scope="session")
def principal():
    return principal_scenario("QQ")


@pytest.fixture(scope="session")
def nilpotent():
    """QQ[x]/(x^3) with I = (x)."""
    return nilpotent_scenario("QQ")


@pytest.fixture(scope="session")
def cone():
    return cone_scenario("QQ")
