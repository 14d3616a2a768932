import math

import numpy as np
import pytest

from csma_bounds import RadioEnvironment

_ACCEPTANCE = []


@pytest.fixture
def env():
    return RadioEnvironment(p_t=1.0, eta=2.2, sigma=2.0, d1=6.0, d2=18.0)


@pytest.fixture
def env0(env):
    return env.with_sigma(0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)


@pytest.fixture
def criterion():
    """Record one acceptance line; call with (name, passed, detail)."""
    def record(name, passed, detail=""):
        _ACCEPTANCE.append((name, bool(passed), detail))
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")


def hex_table_enumeration(d1, d2):
    """Independent enumeration of the dense-network layout table (Configuration 1)."""
    pts = set()
    n0 = math.floor((d2 - d1) / d1)
    for j in range(1, n0 + 2):
        pts.add((j * d1, 0.0))
        pts.add((-j * d1, 0.0))
    k_max = math.floor(2 * d2 / (math.sqrt(3) * d1))
    for k in range(1, k_max + 1):
        y = math.sqrt(3) / 2 * k * d1
        rad = d2 * d2 - 0.75 * k * k * d1 * d1
        if rad < 0:
            continue
        n_k = math.floor(math.sqrt(rad) / d1)
        for j in range(n_k + 1):
            x = d1 * (1 + 2 * j) / 2 if k % 2 == 1 else j * d1
            for sx in (1, -1):
                for sy in (1, -1):
                    pts.add((round(sx * x, 9) + 0.0, round(sy * y, 9) + 0.0))
    return {p for p in pts if math.hypot(*p) <= d2 * (1 + 1e-12)}
