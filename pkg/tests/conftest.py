import os

import pytest
from hypothesis import settings

from segalpy import io

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

FIXTURES = os.path.join(os.path.dirname(__file__), os.pardir, "src", "segalpy", "fixtures")


def fixture_path(name):
    return os.path.normpath(os.path.join(FIXTURES, name))


def load_fixture(name):
    return io.parse_simplicial(io.load(fixture_path(name)))


@pytest.fixture
def s2():
    return load_fixture("s2.json")


@pytest.fixture
def s3():
    return load_fixture("s3.json")


CRITERIA = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        ok, title = CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
