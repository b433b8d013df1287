"""
Shared fixtures for the test suite
Test/conftest.py
"""
import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from app.algebra.cycnum import CycNum  # noqa: E402
from app.config.settings import TestingConfig  # noqa: E402
from app.repositories.parameter_repository import ParameterRepository  # noqa: E402
from app.services.birmap_service import BirationalMapService  # noqa: E402
from app.services.invariant_service import InvariantService  # noqa: E402
from app.services.orbit_service import OrbitService  # noqa: E402
from app.services.picard_service import PicardService  # noqa: E402
from app.services.planar_service import PlanarService  # noqa: E402

settings.register_profile('fast', max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile('thorough', max_examples=300, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.getenv('HYPOTHESIS_PROFILE', 'fast'))


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: long exact computations (period 12, invariant kernels)')


@pytest.fixture(scope='session')
def config():
    return TestingConfig


@pytest.fixture(scope='session')
def repository(config):
    return ParameterRepository(config)


@pytest.fixture
def birmap(config):
    return BirationalMapService(config)


@pytest.fixture
def orbit(config):
    return OrbitService(config)


@pytest.fixture
def picard(config):
    return PicardService(config)


@pytest.fixture
def invariants(config):
    return InvariantService(config)


@pytest.fixture
def planar(config):
    return PlanarService(config)


@pytest.fixture(scope='session')
def omega():
    return CycNum.zeta(3)


@pytest.fixture(scope='session')
def load(repository):
    """Bundled parameter sets by name"""
    return repository.load_parameters


@pytest.fixture(scope='session')
def ledger(repository):
    """Bundled planar ledgers by name"""
    return repository.load_ledger
