import pytest

from twistfe.datasets import load_dataset


@pytest.fixture(scope="session")
def delta():
    return load_dataset("delta")


@pytest.fixture(scope="session")
def level11():
    return load_dataset("level11")


@pytest.fixture(scope="session")
def e4():
    return load_dataset("e4")


@pytest.fixture(scope="session")
def e1():
    return load_dataset("e1")
