import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import DATA  # noqa: E402
from pachner.triangulation import read_triangulation, standard_triangulation  # noqa: E402


@pytest.fixture
def s3():
    return standard_triangulation("canonical_s3")


@pytest.fixture
def b4():
    return standard_triangulation("boundary_4simplex")


@pytest.fixture
def ball():
    return standard_triangulation("single_tet_ball")


@pytest.fixture
def rp3():
    return read_triangulation(DATA / "rp3.tri3")


def load(name):
    return read_triangulation(DATA / name)


# per-criterion results of the acceptance suite: number -> (status, seconds, note)
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, secs, note = ACCEPTANCE[n]
        line = f"criterion {n}: {status} ({secs:.2f}s)"
        terminalreporter.write_line(line + (f" {note}" if note else ""))
