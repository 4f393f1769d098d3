from pathlib import Path

import pytest

import support

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURE_DIR


@pytest.fixture(scope="session")
def example1():
    return support.mdp_example1()


@pytest.fixture(scope="session")
def m1():
    return support.mdp_m1()


@pytest.fixture(scope="session")
def m2():
    return support.mdp_m2()


@pytest.fixture(scope="session")
def m3():
    return support.mdp_m3()
