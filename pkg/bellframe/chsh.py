"""CHSH combinations, relabeling maximisation and the shared-direction closed form.

With Alice's observables ordered (Z, X) and Bob's (P, Q), e[i][j] is the
correlator of Alice's i-th and Bob's j-th observable. The textbook
combination XP + ZP + XQ - ZQ is combos[STANDARD_COMBO_INDEX].
"""
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .exceptions import DomainError
from .models import ChshResult

LOCAL_BOUND = 2.0
TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)
EPS_SAT = 1e-9
ENTRY_TOL = 1e-12
STANDARD_COMBO_INDEX = 2


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    e: np.ndarray

    def __post_init__(self):
        e = np.array(self.e, dtype=float)
        if e.shape != (2, 2):
            raise DomainError(f"correlation matrix must be 2x2, got {e.shape}")
        if np.any(np.abs(e) > 1.0 + ENTRY_TOL) or not np.all(np.isfinite(e)):
            raise DomainError("correlators must lie in [-1, 1]")
        e.setflags(write=False)
        object.__setattr__(self, 'e', e)

    def relabel(self, alice_signs: Sequence[int] = (1, 1), bob_signs: Sequence[int] = (1, 1)) -> 'CorrelationMatrix':
        """Swap the +1/-1 outcome labels of the chosen settings (negates rows/columns)."""
        signs = np.outer(np.asarray(alice_signs, dtype=float), np.asarray(bob_signs, dtype=float))
        return CorrelationMatrix(self.e * signs)


def _combos(e11, e12, e21, e22) -> Tuple:
    # One minus sign in each position; every outcome relabeling maps this set onto itself.
    return (
        e11 + e12 + e21 - e22,
        e11 + e12 - e21 + e22,
        e11 - e12 + e21 + e22,
        -e11 + e12 + e21 + e22,
    )


def chsh_combinations(e: CorrelationMatrix) -> ChshResult:
    m = e.e
    combos = tuple(float(c) for c in _combos(m[0, 0], m[0, 1], m[1, 0], m[1, 1]))
    magnitudes = [abs(c) for c in combos]
    best = max(range(4), key=magnitudes.__getitem__)
    return ChshResult(combos=combos, s_max=magnitudes[best], best_combo_index=best)


def s_max_batch(e: np.ndarray) -> np.ndarray:
    """Relabeling-maximised |S| for a stack of correlation matrices of shape (..., 2, 2)."""
    combos = np.stack(_combos(e[..., 0, 0], e[..., 0, 1], e[..., 1, 0], e[..., 1, 1]), axis=-1)
    return np.abs(combos).max(axis=-1)


def is_violation(result: ChshResult) -> bool:
    # Saturation (S == 2) is not a violation.
    return result.s_max > LOCAL_BOUND + EPS_SAT


def violates(s_max: np.ndarray) -> np.ndarray:
    return np.asarray(s_max) > LOCAL_BOUND + EPS_SAT


def closed_form_s(theta: float, visibility: float) -> float:
    """|S| for a Werner state when Alice and Bob share the Y direction exactly (phi = 0).

    The measurement planes coincide, so S only sees the in-plane offset theta:
    2 sqrt(2) V max(|sin theta|, |cos theta|). Theta in degrees.
    """
    rad = math.radians(theta)
    return TSIRELSON_BOUND * visibility * max(abs(math.sin(rad)), abs(math.cos(rad)))
