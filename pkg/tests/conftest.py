import json
import random
from pathlib import Path

import pytest

from logtangent.arrangement import Arrangement, random_arrangement

DATA = Path(__file__).resolve().parent.parent / "data"

NOGUCHI = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 3), (1, -3, 4)]
CONIC_POINTS = [(1, t, t * t) for t in range(6)]


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def noguchi() -> Arrangement:
    return Arrangement.from_covectors(2, NOGUCHI)


@pytest.fixture
def conic_lines() -> Arrangement:
    return Arrangement.from_covectors(2, CONIC_POINTS)


@pytest.fixture
def four_lines() -> Arrangement:
    return Arrangement.from_covectors(2, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])


def seeded_arrangement(n: int, c: int, seed: int) -> Arrangement:
    return random_arrangement(n, c, random.Random(seed))


def load(name: str) -> dict:
    return json.loads((DATA / name).read_text())


def split_quadric(n: int):
    """``Z0 Z1 - Z2 Z3`` (rank 4) in P^n; its rulings are rational."""
    from logtangent.quadrics import Quadric

    g = [[0] * (n + 1) for _ in range(n + 1)]
    g[0][1] = g[1][0] = 1
    g[2][3] = g[3][2] = -1
    return Quadric.from_matrix(g)


def arrangement_on_quadric(q, c: int, seed: int) -> Arrangement:
    """Hyperplanes dual to ``c`` random rational points of ``q``, in general position."""
    from logtangent.quadrics import random_points_on

    rng = random.Random(seed)
    base = tuple(int(i == 0) for i in range(q.n + 1))
    while True:
        pts = random_points_on(q, base, c, rng, 6)
        a = Arrangement.from_covectors(q.n, pts)
        if a.general_position:
            return a


# Acceptance bookkeeping: tests marked ``criterion(number, title)`` roll up
# into one PASS/FAIL line per criterion in the terminal summary.
_CRITERIA: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not rep.failed):
        return
    number, title = mark.args
    entry = _CRITERIA.setdefault(number, [title, True])
    entry[1] = entry[1] and rep.passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
