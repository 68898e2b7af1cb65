"""Misalignment of Alice's Poincaré sphere relative to Bob's.

Alice's sphere evolves as R_y(chi) R_z(phi) R_y(theta). R_z and the outer
R_y are right-handed, which is what maps y onto
n' = (-sin phi cos chi, cos phi, sin phi sin chi). The in-plane theta turn
runs in the opposite sense about y, so that on the shared-direction slice
(phi = 0) the two turns combine into a single offset theta - chi.

Angles are degrees at every public entry point.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .chsh import CorrelationMatrix, chsh_combinations
from .exceptions import DomainError
from .models import ChshResult
from .quantum import UNIT_TOL, X_AXIS, Z_AXIS, BlochVector, TwoQubitState, correlator

logger = logging.getLogger(__name__)

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

BOB_P = BlochVector(-_INV_SQRT2, 0.0, -_INV_SQRT2)
BOB_Q = BlochVector(-_INV_SQRT2, 0.0, _INV_SQRT2)


def about_y(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def about_z(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def about_y_batch(angles: np.ndarray) -> np.ndarray:
    angles = np.asarray(angles, dtype=float)
    c, s = np.cos(angles), np.sin(angles)
    mats = np.zeros(angles.shape + (3, 3))
    mats[..., 0, 0] = c
    mats[..., 0, 2] = s
    mats[..., 1, 1] = 1.0
    mats[..., 2, 0] = -s
    mats[..., 2, 2] = c
    return mats


@dataclass(frozen=True, eq=False)
class FrameRotation:
    theta: float
    phi: float
    chi: float = 0.0
    matrix: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        theta, phi, chi = self.radians
        matrix = about_y(chi) @ about_z(phi) @ about_y(-theta)
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)

    @property
    def radians(self) -> Tuple[float, float, float]:
        return math.radians(self.theta), math.radians(self.phi), math.radians(self.chi)

    @property
    def n_prime(self) -> np.ndarray:
        """Image of the shared y direction on Alice's side."""
        return self.matrix[:, 1].copy()

    def apply(self, v: BlochVector) -> BlochVector:
        return BlochVector.from_array(self.matrix @ v.as_array())


@dataclass(frozen=True)
class MeasurementPair:
    first: BlochVector
    second: BlochVector

    def __post_init__(self):
        if abs(self.first.dot(self.second)) > UNIT_TOL:
            raise DomainError("the two settings of a party must be mutually unbiased (perpendicular)")


def rotation_matrix(theta: float, phi: float, chi: float = 0.0) -> FrameRotation:
    return FrameRotation(theta, phi, chi)


def alice_directions(rot: FrameRotation) -> MeasurementPair:
    """Alice measures Z and X on her own sphere."""
    return MeasurementPair(rot.apply(Z_AXIS), rot.apply(X_AXIS))


def bob_directions() -> MeasurementPair:
    """Bob's sphere is held fixed: P = -(Z + X)/sqrt 2, Q = (Z - X)/sqrt 2."""
    return MeasurementPair(BOB_P, BOB_Q)


def correlation_matrix(state: TwoQubitState, alice: MeasurementPair, bob: MeasurementPair) -> CorrelationMatrix:
    return CorrelationMatrix([
        [correlator(state, a, b) for b in (bob.first, bob.second)]
        for a in (alice.first, alice.second)
    ])


def chsh_at(state: TwoQubitState, theta: float, phi: float, chi: float = 0.0) -> ChshResult:
    alice = alice_directions(rotation_matrix(theta, phi, chi))
    return chsh_combinations(correlation_matrix(state, alice, bob_directions()))


def alice_direction_batch(thetas: np.ndarray, phi: float, chi: float = 0.0) -> np.ndarray:
    """Alice's (Z', X') directions for many theta at once, shape (n, 2, 3)."""
    outer = about_y(math.radians(chi)) @ about_z(math.radians(phi))
    mats = outer @ about_y_batch(-np.radians(thetas))
    return np.stack([mats[..., :, 2], mats[..., :, 0]], axis=-2)


def uniform_rotations(rng: np.random.Generator, size: int) -> np.ndarray:
    """Rotation matrices drawn uniformly from SO(3), shape (size, 3, 3).

    Unit quaternions from three uniforms (u1, u2, u3):
    (sqrt(1-u1) sin 2pi u2, sqrt(1-u1) cos 2pi u2, sqrt(u1) sin 2pi u3, sqrt(u1) cos 2pi u3)
    are uniform on S^3, and the double cover carries that measure to SO(3).
    """
    u1, u2, u3 = rng.random((3, size))
    a = np.sqrt(1.0 - u1)
    b = np.sqrt(u1)
    x = a * np.sin(2 * np.pi * u2)
    y = a * np.cos(2 * np.pi * u2)
    z = b * np.sin(2 * np.pi * u3)
    w = b * np.cos(2 * np.pi * u3)

    mats = np.empty((size, 3, 3))
    mats[:, 0, 0] = 1 - 2 * (y * y + z * z)
    mats[:, 0, 1] = 2 * (x * y - z * w)
    mats[:, 0, 2] = 2 * (x * z + y * w)
    mats[:, 1, 0] = 2 * (x * y + z * w)
    mats[:, 1, 1] = 1 - 2 * (x * x + z * z)
    mats[:, 1, 2] = 2 * (y * z - x * w)
    mats[:, 2, 0] = 2 * (x * z - y * w)
    mats[:, 2, 1] = 2 * (y * z + x * w)
    mats[:, 2, 2] = 1 - 2 * (x * x + y * y)
    return mats
