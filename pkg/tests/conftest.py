import numpy as np
import pytest

import qcapacity
from qcapacity import _backend


@pytest.fixture(params=_backend.available())
def backend(request):
    previous = qcapacity.use_backend(request.param)
    yield request.param
    qcapacity.use_backend(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_hermitian(rng, n):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (g + g.conj().T)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda l: int(l.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
