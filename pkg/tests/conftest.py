from __future__ import annotations

import functools

import pytest
from hypothesis import HealthCheck, settings

from betatiles.dynamics import parry_data
from betatiles.field import make_beta

import acceptance_log

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("default")

GOLDEN = (1, -1, -1)
TWO_TWO = (1, -2, -2)
THREE_TWO = (1, -3, -2)
SMALLEST = (1, 0, -1, -1)
CUBIC_QM = (1, -2, 1, -1)


@functools.lru_cache(maxsize=None)
def field(poly):
    return make_beta(poly)


@functools.lru_cache(maxsize=None)
def parry(poly):
    return parry_data(field(poly))


@pytest.fixture
def F():
    return field


@pytest.fixture
def P():
    return parry


def pytest_terminal_summary(terminalreporter):
    if not acceptance_log.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(acceptance_log.LINES):
        terminalreporter.write_line(acceptance_log.LINES[key])
