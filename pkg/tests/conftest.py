import numpy as np
import pytest

from bergman_qha.quadrature import DiskQuadrature, GroupQuadrature


@pytest.fixture(scope="session")
def q():
    """Default disk rule (64 x 128)."""
    return DiskQuadrature()


@pytest.fixture(scope="session")
def q_small():
    """Cheaper rule for tests whose integrands are low-degree polynomials."""
    return DiskQuadrature(32, 64)


@pytest.fixture(scope="session")
def gq():
    return GroupQuadrature()


@pytest.fixture(scope="session")
def gq_small():
    return GroupQuadrature(DiskQuadrature(32, 64), 16)


@pytest.fixture
def rng():
    return np.random.default_rng(42)


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def acceptance(request):
    """``report(label, ok, detail)``: print and record one PASS/FAIL line."""
    lines = request.config.stash[_ACCEPTANCE]

    def report(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        print(line)
        lines.append(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
