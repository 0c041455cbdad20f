import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lvbragg.model import InteractionParams, bundled_constants, bundled_scenarios  # noqa: E402

REPO = Path(__file__).resolve().parents[1]
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def scenarios():
    return bundled_scenarios()


@pytest.fixture(scope="session")
def row3(scenarios):
    return scenarios[2]


@pytest.fixture
def no_interaction():
    """Serengeti growth rates with every encounter coefficient switched off."""
    c = bundled_constants()
    return InteractionParams(
        gamma=3, alpha_pp=0.0, alpha_dd=0.0, alpha_pd=0.0, beta_p=c.beta_p, beta_d=c.beta_d,
        lambda1=0.6, lambda2=0.4, xi_p=0.6, xi_d=0.4, nu=0.05, eps_p=0.34, eps_d=0.294,
    )


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is not None and acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in acceptance.RESULTS:
            terminalreporter.write_line(line)
