import sys
from pathlib import Path

import pytest

from dgadequacy.scenario import build_penetration_case

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_LINES = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def penetration_cases():
    return {level: build_penetration_case(level) for level in (15, 25, 35)}


@pytest.fixture(scope="session")
def case25(penetration_cases):
    return penetration_cases[25]


@pytest.fixture(scope="session")
def acceptance_log(request):
    return request.config.stash.setdefault(ACCEPTANCE_LINES, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
