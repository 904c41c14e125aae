"""Shared test fixtures."""

import logging

import numpy as np
import pytest

from padestep.system import StructuralSystem


@pytest.fixture(autouse=True)
def _restore_log_level():
    """--quiet raises the package logger level; undo it between tests."""
    logger = logging.getLogger("padestep")
    level = logger.level
    yield
    logger.setLevel(level)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def _make_spd(rng, n, low=1.0, high=2.0):
    """Random symmetric matrix with eigenvalues spread over [low, high]."""
    basis, _ = np.linalg.qr(rng.standard_normal((n, n)))
    eigenvalues = np.geomspace(low, high, n)
    a = (basis * eigenvalues) @ basis.T
    return 0.5 * (a + a.T)


@pytest.fixture
def make_system(rng):
    """Factory for random undamped (or damped) dense systems."""

    def _factory(n=3, k_range=(1.0, 2.0), damped=False, load=None):
        m = _make_spd(rng, n)
        k = _make_spd(rng, n, *k_range)
        c = 0.05 * m + 0.01 * k if damped else None
        return StructuralSystem.build(m, k, c=c, load=load)

    return _factory


@pytest.fixture
def oscillator():
    """Undamped unit-period oscillator, m = 1, k = 4π²."""
    return StructuralSystem.build([[1.0]], [[4.0 * np.pi**2]])
