import pytest
from hypothesis import settings

from starcore.closure import TestIdealInput
from starcore.ideals import QuotientRing

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def fermat(k, p):
    return QuotientRing("xyz", p, [f"x^{k}+y^{k}+z^{k}"])


@pytest.fixture
def cubic7():
    return fermat(3, 7)


@pytest.fixture
def quintic7():
    return fermat(5, 7)


@pytest.fixture
def decic7():
    return fermat(10, 7)


@pytest.fixture
def xyz7():
    return QuotientRing("xyz", 7, ["x*y*z"])


def tau_of(ideal, note="test"):
    return TestIdealInput(ideal, note)
