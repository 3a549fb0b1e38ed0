from __future__ import annotations

import numpy as np
import pytest

from aqclin.config import load_preset

_criteria: dict[int, list] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        num, text = marker.args
        entry = _criteria.setdefault(num, [text, True])
        entry[1] = entry[1] and rep.outcome == "passed"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        text, ok = _criteria[num]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {num:>2}: {text}")


@pytest.fixture(scope="session")
def preset1():
    return load_preset("alg1_paper")


@pytest.fixture(scope="session")
def preset2():
    return load_preset("alg2_paper")


@pytest.fixture(scope="session")
def inst1(preset1):
    return preset1.instance()


@pytest.fixture(scope="session")
def inst2(preset2):
    return preset2.instance()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_hermitian(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (m + m.conj().T) / 2


def random_density(rng, dim, rank=None):
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
