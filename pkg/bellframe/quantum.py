"""Bloch-vector algebra, two-qubit density matrices and joint correlators.

The four-dimensional space is ordered |00>, |01>, |10>, |11> with Alice's
qubit as the left tensor factor. A dichotomic observable O is identified
with the unit vector r such that O = r . (X, Y, Z).
"""
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .exceptions import DomainError

logger = logging.getLogger(__name__)

UNIT_TOL = 1e-12
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-10

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI_VECTOR = (PAULI_X, PAULI_Y, PAULI_Z)

for _m in (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z):
    _m.setflags(write=False)

SINGLET_KET = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)
SINGLET_KET.setflags(write=False)


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ('x', 'y', 'z'):
            object.__setattr__(self, name, float(getattr(self, name)))
        norm_sq = self.x * self.x + self.y * self.y + self.z * self.z
        if not math.isfinite(norm_sq) or abs(norm_sq - 1.0) > UNIT_TOL:
            raise DomainError(f"observable direction must be a unit vector, got |r|^2 = {norm_sq!r}")

    @classmethod
    def from_array(cls, values: Sequence[float], normalize: bool = False) -> 'BlochVector':
        v = np.asarray(values, dtype=float).reshape(3)
        if normalize:
            norm = np.linalg.norm(v)
            if norm == 0:
                raise DomainError("cannot normalise the zero vector")
            v = v / norm
        return cls(v[0], v[1], v[2])

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def dot(self, other: 'BlochVector') -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def observable(self) -> np.ndarray:
        """The 2x2 operator r . sigma with eigenvalues +1 and -1."""
        return self.x * PAULI_X + self.y * PAULI_Y + self.z * PAULI_Z

    def __neg__(self) -> 'BlochVector':
        return BlochVector(-self.x, -self.y, -self.z)


X_AXIS = BlochVector(1.0, 0.0, 0.0)
Y_AXIS = BlochVector(0.0, 1.0, 0.0)
Z_AXIS = BlochVector(0.0, 0.0, 1.0)

# Polarization eigenstates on the Poincaré sphere.
HORIZONTAL = Z_AXIS
VERTICAL = -Z_AXIS
DIAGONAL = X_AXIS
ANTIDIAGONAL = -X_AXIS
RIGHT_CIRCULAR = Y_AXIS
LEFT_CIRCULAR = -Y_AXIS


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    rho: np.ndarray
    visibility: Optional[float] = None

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        if rho.shape != (4, 4):
            raise DomainError(f"two-qubit density matrix must be 4x4, got {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
            raise DomainError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > TRACE_TOL:
            raise DomainError(f"density matrix trace is {np.trace(rho).real!r}, expected 1")
        min_eig = np.linalg.eigvalsh(rho).min()
        if min_eig < EIGENVALUE_FLOOR:
            raise DomainError(f"density matrix is not positive semidefinite (eigenvalue {min_eig!r})")
        rho.setflags(write=False)
        object.__setattr__(self, 'rho', rho)

    @cached_property
    def correlation_tensor(self) -> np.ndarray:
        return correlation_tensor(self)

    def __repr__(self) -> str:
        return f"TwoQubitState(visibility={self.visibility!r}, singlet_fidelity={singlet_fidelity(self):.6f})"


def singlet() -> TwoQubitState:
    return TwoQubitState(np.outer(SINGLET_KET, SINGLET_KET.conj()), visibility=1.0)


def werner(visibility: float) -> TwoQubitState:
    """V |Psi-><Psi-| + (1 - V) I/4."""
    if not (0.0 <= visibility <= 1.0):
        raise DomainError(f"visibility must lie in [0, 1], got {visibility!r}")
    rho = visibility * np.outer(SINGLET_KET, SINGLET_KET.conj()) + (1.0 - visibility) * np.eye(4) / 4
    return TwoQubitState(rho, visibility=float(visibility))


def werner_from_fidelity(fidelity: float) -> TwoQubitState:
    if not (0.25 <= fidelity <= 1.0):
        raise DomainError(f"singlet fidelity must lie in [1/4, 1], got {fidelity!r}")
    visibility = min(1.0, max(0.0, (4.0 * fidelity - 1.0) / 3.0))
    return werner(visibility)


def fidelity(state: TwoQubitState, ket: np.ndarray) -> float:
    ket = np.asarray(ket, dtype=complex)
    return float(np.real(ket.conj() @ state.rho @ ket))


def singlet_fidelity(state: TwoQubitState) -> float:
    return fidelity(state, SINGLET_KET)


def correlator(state: TwoQubitState, a: BlochVector, b: BlochVector) -> float:
    """E(a, b) = Tr[rho (a.sigma) (x) (b.sigma)]."""
    joint = np.kron(a.observable(), b.observable())
    value = float(np.real(np.trace(state.rho @ joint)))
    return min(1.0, max(-1.0, value))


def correlation_tensor(state: TwoQubitState) -> np.ndarray:
    """T[i, j] = Tr[rho sigma_i (x) sigma_j], so that E(a, b) = a^T T b for any state."""
    tensor = np.empty((3, 3))
    for i, left in enumerate(PAULI_VECTOR):
        for j, right in enumerate(PAULI_VECTOR):
            tensor[i, j] = np.real(np.trace(state.rho @ np.kron(left, right)))
    tensor.setflags(write=False)
    return tensor


def projector(direction: BlochVector, outcome: int) -> np.ndarray:
    if outcome not in (1, -1):
        raise DomainError(f"outcome must be +1 or -1, got {outcome!r}")
    return (PAULI_I + outcome * direction.observable()) / 2


def joint_probabilities(state: TwoQubitState, a: BlochVector, b: BlochVector) -> np.ndarray:
    """Born probabilities p[i, j] for outcomes ordered (+1, -1) on each side."""
    probs = np.empty((2, 2))
    for i, alice_outcome in enumerate((1, -1)):
        for j, bob_outcome in enumerate((1, -1)):
            joint = np.kron(projector(a, alice_outcome), projector(b, bob_outcome))
            probs[i, j] = np.real(np.trace(state.rho @ joint))
    return probs
