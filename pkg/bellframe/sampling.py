"""Grid scans over (theta, phi), weighted violation probabilities and random-frame Monte Carlo."""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .chsh import is_violation, s_max_batch, violates
from .exceptions import DomainError, GridRangeError
from .frames import BOB_P, BOB_Q, alice_direction_batch, chsh_at, uniform_rotations
from .models import SamplingSpec, ViolationCurve, ViolationRow
from .quantum import TwoQubitState

logger = logging.getLogger(__name__)

PHI_STEP = 10.0
GRID_TOL = 1e-9
DEFAULT_CHUNK_SIZE = 250_000

_BOB = np.stack([BOB_P.as_array(), BOB_Q.as_array()])


def chsh_grid(state: TwoQubitState, thetas: Sequence[float], phi: float, chi: float = 0.0) -> np.ndarray:
    """s_max for every theta in one vectorised pass (correlators via the correlation tensor)."""
    alice = alice_direction_batch(np.asarray(thetas, dtype=float), phi, chi)
    e = np.einsum('nik,kl,jl->nij', alice, state.correlation_tensor, _BOB)
    return s_max_batch(e)


def scan(state: TwoQubitState, spec: Optional[SamplingSpec] = None) -> ViolationCurve:
    spec = spec or SamplingSpec()
    if not spec.theta_grid:
        raise DomainError("theta grid is empty")
    rows = []
    for phi in spec.phi_grid:
        points = [chsh_at(state, theta, phi, chi) for chi in spec.chis for theta in spec.theta_grid]
        count = sum(1 for r in points if is_violation(r))
        rows.append(ViolationRow(
            phi=phi,
            f=count / len(points),
            mean_s=float(np.mean([r.s_max for r in points])),
            violations=count,
            points=points,
        ))
    logger.debug("scanned %d phi rows x %d points", len(rows), len(rows[0].points))

    curve = ViolationCurve(rows=rows)
    step = _anchored_step(spec.phi_grid)
    if step is not None:
        fs = curve.f_values()
        cumulative = [(t, weighted_probability(fs, t, step)) for t in range(len(fs))]
        curve = curve.model_copy(update={'cumulative': cumulative})
    return curve


def _anchored_step(phis: Sequence[float]) -> Optional[float]:
    """Step of a grid of the form [0 : step : step*t], or None."""
    if abs(phis[0]) > GRID_TOL:
        return None
    if len(phis) == 1:
        return PHI_STEP
    step = phis[1] - phis[0]
    if all(abs(p - s * step) <= GRID_TOL for s, p in enumerate(phis)):
        return step
    return None


def normalization(t: int, phi_step: float = PHI_STEP) -> float:
    """C such that the t > 0 weights sum to one; the differences telescope to 1 - cos(t*step)."""
    if t < 1:
        raise DomainError(f"normalisation is defined for t >= 1, got {t!r}")
    return 1.0 / (1.0 - math.cos(math.radians(t * phi_step)))


def mu(s: int, t: int, phi_step: float = PHI_STEP) -> float:
    """Weight of the row phi = s*step in the cumulative sum up to row t.

    At t = 0 the single anchor row carries all the weight. For t > 0 the
    anchor is dropped and row s gets C [cos((s-1) step) - cos(s step)],
    the sphere-area of the band between the two polar angles.
    """
    if s < 0:
        raise DomainError(f"row index must be non-negative, got {s!r}")
    if t < 0:
        raise DomainError(f"cumulative index must be non-negative, got {t!r}")
    if t == 0:
        return 1.0 if s == 0 else 0.0
    if s == 0 or s > t:
        return 0.0
    lower = math.cos(math.radians((s - 1) * phi_step))
    upper = math.cos(math.radians(s * phi_step))
    return normalization(t, phi_step) * (lower - upper)


def weighted_probability(fs: Sequence[float], t: int, phi_step: float = PHI_STEP) -> float:
    if t < 0 or t >= len(fs):
        raise GridRangeError(f"cumulative index t={t} needs {t + 1} phi rows, have {len(fs)}")
    p = sum(mu(s, t, phi_step) * fs[s] for s in range(t + 1))
    return min(1.0, max(0.0, p))


def cumulative_probability(curve: ViolationCurve, t: int, phi_step: float = PHI_STEP) -> float:
    fs = []
    for s in range(t + 1):
        row = next((r for r in curve.rows if abs(r.phi - s * phi_step) <= GRID_TOL), None)
        if row is None:
            raise GridRangeError(f"curve has no row at phi = {s * phi_step:g} deg (needed for t={t})")
        fs.append(row.f)
    return weighted_probability(fs, t, phi_step)


def violation_fraction_continuous(state: TwoQubitState, phi: float, theta_step: float, chi: float = 0.0) -> float:
    """Fraction of theta in [0, 180) with strict violation at resolution theta_step."""
    if not theta_step > 0:
        raise DomainError(f"theta step must be positive, got {theta_step!r}")
    steps = 180.0 / theta_step
    count = round(steps)
    if count < 1 or abs(steps - count) > GRID_TOL * max(1.0, steps):
        raise DomainError(f"theta step {theta_step!r} does not divide 180 degrees")
    thetas = np.arange(count) * theta_step
    hits = int(np.count_nonzero(violates(chsh_grid(state, thetas, phi, chi))))
    return hits / count


def _count_block(tensor: np.ndarray, size: int, seed: np.random.SeedSequence) -> int:
    rng = np.random.default_rng(seed)
    rotations = uniform_rotations(rng, size)
    # Alice's Z and X carried by a uniformly random frame.
    alice = np.stack([rotations[:, :, 2], rotations[:, :, 0]], axis=1)
    e = np.einsum('nik,kl,jl->nij', alice, tensor, _BOB)
    return int(np.count_nonzero(violates(s_max_batch(e))))


def random_frame_violation_probability(
    state: TwoQubitState,
    samples: int,
    seed: int,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    workers: int = 1,
) -> Tuple[float, float]:
    """Probability that a uniformly random relative frame yields a strict violation.

    Sample k lives in block k // chunk_size, and block b draws from child b of
    SeedSequence(seed); block counts are integers, so the total does not
    depend on how many workers evaluate the blocks.
    """
    if samples < 1:
        raise DomainError(f"need at least one sample, got {samples!r}")
    if chunk_size < 1:
        raise DomainError(f"chunk size must be positive, got {chunk_size!r}")
    sizes = [min(chunk_size, samples - start) for start in range(0, samples, chunk_size)]
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    tensor = state.correlation_tensor
    logger.debug("monte carlo: %d samples in %d blocks on %d workers", samples, len(sizes), workers)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts: List[int] = list(pool.map(_count_block, [tensor] * len(sizes), sizes, seeds))
    else:
        counts = [_count_block(tensor, size, ss) for size, ss in zip(sizes, seeds)]

    p = sum(counts) / samples
    stderr = math.sqrt(p * (1.0 - p) / samples)
    logger.info("random-frame violation probability %.5f +/- %.5f (%d samples)", p, stderr, samples)
    return p, stderr
