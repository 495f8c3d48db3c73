import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qteam import DecisionProblem  # noqa: E402


@pytest.fixture
def d_star():
    return DecisionProblem(0.8, 0.8, 1.0, 3.0)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[key])
