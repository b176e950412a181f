import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from smti import Instance, parse_instance, table1  # noqa: E402
from smti.generator import GenParams, generate  # noqa: E402

MINIMAL = "smti 1\nm 1: 1\nw 1: 1\n"
# m_i and w_i accept only each other
FORCED2 = "smti 2\nm 1: 1\nm 2: 2\nw 1: 1\nw 2: 2\n"


@pytest.fixture
def t1() -> Instance:
    return table1()


@pytest.fixture
def minimal() -> Instance:
    return parse_instance(MINIMAL)


@pytest.fixture
def forced2() -> Instance:
    return parse_instance(FORCED2)


def small_instances(n_values=(2, 3, 4), seeds=range(3), p1s=(0.1, 0.5), p2s=(0.0, 0.5, 1.0)):
    for n in n_values:
        for p1 in p1s:
            for p2 in p2s:
                for s in seeds:
                    yield generate(GenParams(n, p1, p2, seed=s))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line for the terminal summary, then assert."""
    def _report(label: str, ok: bool, detail: str = ""):
        line = f"{label}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
