import random

import pytest
from hypothesis import settings

from tropdiv import fixtures

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

GENUS_FIXTURES = ["cycle", "theta", "dumbbell", "peace_sign", "chain3", "k4"]


@pytest.fixture
def rng():
    return random.Random(12345)


def graph(name):
    return fixtures.get(name).graph


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
