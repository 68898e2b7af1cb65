"""Poissonian coincidence counting and the one-standard-deviation violation test.

Pairs arrive as a Poisson process; each detected pair lands in one of the
four joint outcomes with its Born probability. Conditioning on the total
and splitting multinomially is the same as four independent Poisson
streams. There are no dark counts, accidentals or detector losses.
"""
import logging
import math
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .chsh import EPS_SAT, LOCAL_BOUND, CorrelationMatrix, chsh_combinations
from .exceptions import ContractError, DomainError, InsufficientDataError
from .frames import alice_directions, bob_directions, rotation_matrix
from .models import ChshResult, CountRecord, EstimatedChsh, NoisyRow, SamplingSpec, ViolationClass
from .quantum import BlochVector, TwoQubitState, joint_probabilities

logger = logging.getLogger(__name__)

Seed = Union[int, np.random.SeedSequence]

# Spawn order of the per-setting seeds inside one CHSH measurement.
SETTINGS: Tuple[Tuple[int, int], ...] = ((0, 0), (0, 1), (1, 0), (1, 1))

# Largest expected pair count per setting; numpy.random.Generator.poisson rejects means near 2**63.
MAX_MEAN_PAIRS = 1e12


def simulate_counts(
    state: TwoQubitState,
    alice_dir: BlochVector,
    bob_dir: BlochVector,
    rate: float,
    duration: float,
    seed: Seed,
    setting: Tuple[int, int] = (0, 0),
) -> CountRecord:
    if not rate > 0:
        raise DomainError(f"pair rate must be positive, got {rate!r}")
    if not duration > 0:
        raise DomainError(f"integration time must be positive, got {duration!r}")
    mean_pairs = rate * duration
    if not mean_pairs <= MAX_MEAN_PAIRS:
        raise DomainError(f"expected pair count rate * duration = {mean_pairs:.3g} exceeds {MAX_MEAN_PAIRS:.0e}")
    rng = np.random.default_rng(seed)
    probs = np.clip(joint_probabilities(state, alice_dir, bob_dir).ravel(), 0.0, None)
    probs /= probs.sum()
    pairs = rng.poisson(mean_pairs)
    n_pp, n_pm, n_mp, n_mm = (int(n) for n in rng.multinomial(pairs, probs))
    return CountRecord(
        setting=setting,
        n_pp=n_pp,
        n_pm=n_pm,
        n_mp=n_mp,
        n_mm=n_mm,
        duration=duration,
        rate=rate,
    )


def estimate_correlator(rec: CountRecord) -> Tuple[float, float]:
    """Plug-in estimate with multinomial standard deviation sqrt((1 - e^2) / N).

    At |e| = 1 the deviation is 0, which understates the uncertainty of
    small samples.
    """
    total = rec.total
    if total == 0:
        raise InsufficientDataError(f"no coincidences recorded for setting {rec.setting}")
    e_hat = (rec.n_pp + rec.n_mm - rec.n_pm - rec.n_mp) / total
    sigma = math.sqrt(max(0.0, 1.0 - e_hat * e_hat) / total)
    return e_hat, sigma


def estimate_chsh(records: Iterable[CountRecord]) -> EstimatedChsh:
    by_setting = {rec.setting: rec for rec in records}
    missing = [s for s in SETTINGS if s not in by_setting]
    if missing:
        raise DomainError(f"missing count records for settings {missing}")

    e_hat = [[0.0, 0.0], [0.0, 0.0]]
    sigma_e = [[0.0, 0.0], [0.0, 0.0]]
    for i, j in SETTINGS:
        e_hat[i][j], sigma_e[i][j] = estimate_correlator(by_setting[(i, j)])

    # Every combination carries all four correlators with unit weight.
    sigma = math.sqrt(sum(s * s for row in sigma_e for s in row))
    result = chsh_combinations(CorrelationMatrix(e_hat)).with_sigma(sigma)
    return EstimatedChsh(
        e_hat=(tuple(e_hat[0]), tuple(e_hat[1])),
        sigma_e=(tuple(sigma_e[0]), tuple(sigma_e[1])),
        result=result,
    )


def simulate_chsh(
    state: TwoQubitState,
    theta: float,
    phi: float,
    chi: float,
    rate: float,
    duration: float,
    seed: Seed,
) -> EstimatedChsh:
    alice = alice_directions(rotation_matrix(theta, phi, chi))
    bob = bob_directions()
    seeds = _seed_sequence(seed).spawn(len(SETTINGS))
    records = [
        simulate_counts(
            state,
            (alice.first, alice.second)[i],
            (bob.first, bob.second)[j],
            rate,
            duration,
            ss,
            setting=(i, j),
        )
        for (i, j), ss in zip(SETTINGS, seeds)
    ]
    return estimate_chsh(records)


def classify_violation(est: Union[EstimatedChsh, ChshResult]) -> ViolationClass:
    result = est.result if isinstance(est, EstimatedChsh) else est
    if result.sigma is None:
        raise ContractError("classification needs a CHSH value with a standard deviation")
    bound = LOCAL_BOUND + EPS_SAT
    if result.s_max - result.sigma > bound:
        return ViolationClass.VIOLATES_BY_SIGMA
    if result.s_max > bound:
        return ViolationClass.VIOLATES_MEAN_ONLY
    return ViolationClass.NO_VIOLATION


def simulate_grid(
    state: TwoQubitState,
    points: Sequence[Tuple[float, float, float]],
    rate: float,
    duration: float,
    seed: Seed,
) -> List[EstimatedChsh]:
    """Simulate each (theta, phi, chi) point with its own child seed, in the given order."""
    seeds = _seed_sequence(seed).spawn(len(points))
    return [
        simulate_chsh(state, theta, phi, chi, rate, duration, ss)
        for (theta, phi, chi), ss in zip(points, seeds)
    ]


def noisy_curve(
    state: TwoQubitState,
    spec: Optional[SamplingSpec],
    rate: float,
    duration: float,
    seed: Seed,
) -> List[NoisyRow]:
    """Per phi row: fraction whose mean violates, and fraction violating by more than one sigma."""
    spec = spec or SamplingSpec()
    points = [(theta, phi, chi) for phi in spec.phi_grid for chi in spec.chis for theta in spec.theta_grid]
    estimates = simulate_grid(state, points, rate, duration, seed)
    per_row = len(spec.chis) * len(spec.theta_grid)

    rows = []
    for k, phi in enumerate(spec.phi_grid):
        block = estimates[k * per_row:(k + 1) * per_row]
        classes = [classify_violation(est) for est in block]
        by_sigma = sum(c is ViolationClass.VIOLATES_BY_SIGMA for c in classes)
        mean_only = sum(c is ViolationClass.VIOLATES_MEAN_ONLY for c in classes)
        rows.append(NoisyRow(
            phi=phi,
            f_mean=(by_sigma + mean_only) / per_row,
            f_sigma=by_sigma / per_row,
            points=block,
        ))
    logger.info("noisy curve: %d rows, %.0f s per setting at %.0f pairs/s", len(rows), duration, rate)
    return rows


def _seed_sequence(seed: Seed) -> np.random.SeedSequence:
    return seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
