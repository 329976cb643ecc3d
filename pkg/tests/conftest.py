import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from minbasis import PartitionSpec, ling_tang, nathanson, sun  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture
def even_odd():
    return nathanson(2)


@pytest.fixture
def thmb_negative():
    # W_1 = {0,1,2} ∪ {even n >= 4}, W_2 = {odd n >= 3}
    return PartitionSpec(2, (1, 1, 1), 2, (2, 1))


@pytest.fixture
def builtins_small():
    return [nathanson(2), nathanson(3), ling_tang(0), sun(2, 3), sun(3, 2)]


@pytest.fixture
def acceptance_log():
    def log(criterion, passed, detail=""):
        ACCEPTANCE_LINES.append(f"[criterion {criterion}] {'PASS' if passed else 'FAIL'} {detail}".rstrip())
    return log


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
