import pytest

from tmsatlab.fixtures import FIXTURE_NAMES, load_fixture


@pytest.fixture(scope="session")
def m_accept1():
    return load_fixture("m_accept1")


@pytest.fixture(scope="session")
def m_loop():
    return load_fixture("m_loop")


@pytest.fixture(scope="session")
def m_nd():
    return load_fixture("m_nd")


@pytest.fixture(scope="session")
def m_parity():
    return load_fixture("m_parity")


@pytest.fixture(scope="session")
def fixture_set():
    return [load_fixture(name) for name in FIXTURE_NAMES]
