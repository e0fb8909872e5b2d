import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from depchoice.completion import bl_completion  # noqa: E402
from depchoice.dsc import Dsc  # noqa: E402
from depchoice.rdp import build_rdp  # noqa: E402

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def running():
    return Dsc.from_dict({"a": [["b"], ["c"]], "b": [[]], "c": [[]]})


@pytest.fixture
def running_rdp(running):
    return build_rdp(running)


@pytest.fixture
def running_bl(running_rdp):
    return bl_completion(running_rdp)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
