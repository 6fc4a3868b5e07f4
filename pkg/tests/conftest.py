import pytest

from timeop.fock import BasisWindow, ModelParams, StateVector


@pytest.fixture
def params():
    return ModelParams()


def ket(window: BasisWindow, n: int) -> StateVector:
    return StateVector.basis(window, n)
