import pytest

from orbitint.ratmap import MapSystem, make_map


@pytest.fixture
def z2():
    return make_map([0, 0, 1], [1])


@pytest.fixture
def z3():
    return make_map([0, 0, 0, 1], [1])


@pytest.fixture
def recip_square():
    return make_map([1], [0, 0, 1])  # 1/z^2


@pytest.fixture
def z2_minus_1():
    return make_map([-1, 0, 1], [1])


@pytest.fixture
def pair_system(z2, z3):
    return MapSystem([z2, z3])
