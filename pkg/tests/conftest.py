import pytest

from mtcf.algebra.premetric import InvolutiveMetricGroup
from mtcf.category.condense import condense
from mtcf.category.gidata import GIInput, build_gi_data, rank28_input
from mtcf.category.su3k import psu3_data

SWAP = ((0, 1), (1, 0))
GAMMA_THETA_10 = ((0, 1, 0), (1, 0, 0), (0, 0, -1))


def toric_code_input() -> GIInput:
    """(Z2 x Z2, (-1)^xy) against (Z2 x Z2 x Z3, i^(x^2+y^2) w^(z^2))."""
    G = InvolutiveMetricGroup.build((2, 2), 4, ((0, 1), (1, 0)), SWAP)
    Gamma = InvolutiveMetricGroup.build((2, 2, 3), 12, ((3, 0, 0), (0, 3, 0), (0, 0, 4)), GAMMA_THETA_10)
    return GIInput(G, Gamma, name="rank10-tc")


@pytest.fixture(scope="session")
def rank28_h():
    return build_gi_data(rank28_input("h"))


@pytest.fixture(scope="session")
def rank28_e():
    return build_gi_data(rank28_input("e"))


@pytest.fixture
def rank10_input():
    return toric_code_input()


@pytest.fixture(scope="session")
def rank10():
    return build_gi_data(toric_code_input())


@pytest.fixture(scope="session")
def condensation(rank28_h):
    return condense(rank28_h)


@pytest.fixture(scope="session")
def psu35():
    return psu3_data(5)
