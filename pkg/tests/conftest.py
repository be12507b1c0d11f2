import sys
import functools

import pytest

from qsuper.berezin import BlockCalculus
from qsuper.hopf import HopfEnvelope
from qsuper.ncalg import generate_relations
from qsuper.rmatrix import build_multiparameter


@functools.lru_cache(maxsize=None)
def symmetry(m, n):
    return build_multiparameter(m, n)


@functools.lru_cache(maxsize=None)
def bialgebra(m, n, bound=8):
    return generate_relations(symmetry(m, n), "bialgebra_E", bound)


@functools.lru_cache(maxsize=None)
def envelope(m, n):
    return HopfEnvelope(symmetry(m, n), 8, E=bialgebra(m, n))


@functools.lru_cache(maxsize=None)
def calculus(m, n) -> BlockCalculus:
    return envelope(m, n).calc


@pytest.fixture
def env11():
    return envelope(1, 1)


@pytest.fixture
def E11():
    return bialgebra(1, 1)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
