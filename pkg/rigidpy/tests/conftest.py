import itertools

import numpy as np
import pytest

import rigidpy as rgd


@pytest.fixture(scope="session")
def h1():
    return rgd.walsh_hadamard(1)


@pytest.fixture(scope="session")
def h3():
    return rgd.walsh_hadamard(3)


@pytest.fixture(scope="session")
def m1():
    return rgd.distance_matrix(1)


@pytest.fixture(scope="session")
def all_2x2_sign_matrices():
    return [
        rgd.SignMatrix(np.array(signs).reshape(2, 2))
        for signs in itertools.product((1, -1), repeat=4)
    ]


@pytest.fixture(scope="session")
def random_3x3_sign_matrices():
    rng = np.random.default_rng(2024)
    return [rgd.SignMatrix(rng.choice([1, -1], size=(3, 3))) for _ in range(50)]
