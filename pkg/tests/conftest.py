import time

import pytest

from epreinvex import builtin_space, piecewise_fn
from epreinvex.region import Region

H_PIECES = [
    ["1 < x <= 2", "0"],
    ["x > 2", "1"],
    ["0 <= x <= 1", "1 - x"],
    ["x < 0", "2 - x"],
]


@pytest.fixture(scope="session")
def ex1():
    return builtin_space("ex1")


@pytest.fixture(scope="session")
def ex2():
    return builtin_space("ex2")


@pytest.fixture(scope="session")
def euclid():
    return builtin_space("euclid")


@pytest.fixture(scope="session")
def h():
    return piecewise_fn(H_PIECES, "h")


@pytest.fixture(scope="session")
def set_a():
    return Region.parse(["[-4, -1)", "[1, 4]"])


# -- acceptance summary ----------------------------------------------------------

ACCEPTANCE_LINES: dict = {}
SUITE_LIMIT = 60.0
_session_start = [0.0]


@pytest.fixture
def record():
    """record(n, ok, detail) stores one pass/fail line for criterion n."""

    def _record(n: int, ok: bool, detail: str) -> None:
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES[n] = line
        print(line)

    return _record


def pytest_sessionstart(session):
    _session_start[0] = time.perf_counter()


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.perf_counter() - _session_start[0]
    if ACCEPTANCE_LINES:
        ok = elapsed < SUITE_LIMIT
        ACCEPTANCE_LINES[12] = f"criterion 12: {'PASS' if ok else 'FAIL'}  full suite {elapsed:.1f} s (limit {SUITE_LIMIT:.0f} s)"
        if not ok:
            session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
