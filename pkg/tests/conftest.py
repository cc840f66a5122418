import pytest

from selfaffine import validate_pair


@pytest.fixture
def doubling_pair():
    """(2, {0,1}): the unit-interval tile."""
    return validate_pair([[2.0]], [[0.0], [1.0]])


@pytest.fixture
def negative_doubling_pair():
    """(-2, {0,1}): tiles [-2/3, 1/3], origin interior."""
    return validate_pair([[-2.0]], [[0.0], [1.0]])


@pytest.fixture
def collision_pair():
    """(4, {0,1,2,8}): 8 = 8 + 4*0 = 0 + 4*2 collides at level 2."""
    return validate_pair([[4.0]], [[0.0], [1.0], [2.0], [8.0]])


@pytest.fixture
def cantor_pair_32():
    """(3, {0,2}): attractor is the middle-thirds Cantor set on [0,1]."""
    return validate_pair([[3.0]], [[0.0], [2.0]])


@pytest.fixture
def overfull_pair():
    """(3/2, {0,1}): two digits against determinant 1.5."""
    return validate_pair([[1.5]], [[0.0], [1.0]])


@pytest.fixture
def twin_dragon_pair():
    """Planar similarity with ratio sqrt(2) and two digits."""
    return validate_pair([[1.0, -1.0], [1.0, 1.0]], [[0.0, 0.0], [1.0, 0.0]])
