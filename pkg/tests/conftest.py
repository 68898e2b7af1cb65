import math

import numpy as np
import pytest

from bellframe.quantum import BlochVector, singlet, werner, werner_from_fidelity

EXPERIMENTAL_FIDELITY = 0.994
SQRT2 = math.sqrt(2.0)


@pytest.fixture
def singlet_state():
    return singlet()


@pytest.fixture
def experimental_state():
    return werner_from_fidelity(EXPERIMENTAL_FIDELITY)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_unit(rng) -> BlochVector:
    return BlochVector.from_array(rng.normal(size=3), normalize=True)


def random_rotation(rng) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_werner(rng):
    return werner(float(rng.uniform(0.0, 1.0)))


def random_pair(rng):
    """Two perpendicular random unit vectors (a mutually unbiased pair)."""
    from bellframe.frames import MeasurementPair

    a = random_unit(rng).as_array()
    helper = rng.normal(size=3)
    perp = helper - (a @ helper) * a
    return MeasurementPair(BlochVector.from_array(a), BlochVector.from_array(perp, normalize=True))
