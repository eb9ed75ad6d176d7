import importlib

import numpy as np
import pytest

from distqc import _fallback

try:
    _native = importlib.import_module("distqc._native")
except ImportError:  # extension not built
    _native = None

BACKENDS = [pytest.param(_fallback, id="python")]
BACKENDS.append(
    pytest.param(_native, id="native", marks=pytest.mark.skipif(_native is None, reason="extension not built"))
)


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_state(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


ACCEPTANCE_LINES = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
