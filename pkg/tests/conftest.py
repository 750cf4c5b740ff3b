import numpy as np
import pytest

from eipld import Params, repair_times


@pytest.fixture(scope="session")
def repair():
    return repair_times()


@pytest.fixture(scope="session")
def eipld_fit(repair):
    from eipld import fit_mle
    return fit_mle("EIPLD", repair)


@pytest.fixture
def rng():
    return np.random.default_rng(20241017)


REFERENCE_POINT = Params(1.20167, 25.94112, 0.06205)

# filled by the acceptance tests, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
