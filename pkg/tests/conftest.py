import os
import sys

import numpy as np
import pytest
from typer.testing import CliRunner

# Add the parent directory to sys.path to allow imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from maxbent.services import constructions  # noqa: E402
from maxbent.services.field import ctx_build  # noqa: E402
from maxbent.services.vectorial import VecFun, gold  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive campaigns and timing checks")


# F_4 = F_2[x]/(x^2+x+1), F_16 with x^4+x+1 (primitive, alpha = 0x2)
@pytest.fixture(scope="session")
def f4():
    return ctx_build(2)


@pytest.fixture(scope="session")
def f16():
    return ctx_build(4)


@pytest.fixture(scope="session")
def f64():
    return ctx_build(6)


@pytest.fixture(scope="session")
def f256():
    return ctx_build(8)


@pytest.fixture(scope="session")
def gold16(f16):
    return gold(f16)


@pytest.fixture(scope="session")
def gold64(f64):
    return gold(f64)


@pytest.fixture(scope="session")
def binomial16(f16):
    """x^2 (x + x^4) on F_16."""
    return constructions.binomial(f16, 1)


@pytest.fixture(scope="session")
def binomial64(f64):
    return constructions.binomial(f64, 1)


@pytest.fixture(scope="session")
def identity16(f16):
    return VecFun.identity(f16)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(1234))


@pytest.fixture
def runner():
    return CliRunner()
