"""Command bodies shared by the typer CLI and the HTTP routers."""
import logging
from typing import List, Optional

from .chsh import is_violation
from .deps import Settings
from .frames import chsh_at
from .models import (
    CountsConfig,
    CountsRow,
    CurveConfig,
    CurveReport,
    CurveRow,
    MonteCarloConfig,
    MonteCarloSummary,
    NoisyCurveReport,
    NoisyCurveRow,
    SamplingSpec,
    ScanConfig,
    ScanRow,
    StateConfig,
)
from .noise import classify_violation, noisy_curve, simulate_grid
from .quantum import TwoQubitState, werner, werner_from_fidelity
from .sampling import random_frame_violation_probability, scan, weighted_probability

logger = logging.getLogger(__name__)


def build_state(config: StateConfig) -> TwoQubitState:
    if config.fidelity is not None:
        return werner_from_fidelity(config.fidelity)
    return werner(config.visibility)


def run_scan(config: ScanConfig) -> List[ScanRow]:
    state = build_state(config)
    rows = []
    for phi in config.phi:
        for theta in config.theta:
            result = chsh_at(state, theta, phi, config.chi)
            rows.append(ScanRow(
                theta_deg=theta,
                phi_deg=phi,
                chi_deg=config.chi,
                s_max=result.s_max,
                combo_index=result.best_combo_index,
                violates=is_violation(result),
            ))
    logger.info("scan: %d points", len(rows))
    return rows


def _spec(config: CurveConfig) -> SamplingSpec:
    return SamplingSpec(
        theta_grid=config.theta,
        phi_grid=config.phi,
        chi=config.chi,
        chi_grid=config.chi_grid,
    )


def _phi_step(phis: List[float]) -> Optional[float]:
    return phis[1] - phis[0] if len(phis) > 1 else None


def run_curve(config: CurveConfig) -> CurveReport:
    curve = scan(build_state(config), _spec(config))
    rows = [
        CurveRow(phi_deg=row.phi, f=row.f, p_cumulative=p)
        for row, (_, p) in zip(curve.rows, curve.cumulative)
    ]
    report = CurveReport(rows=rows, p=rows[-1].p_cumulative)
    logger.info("curve: p(t=%d) = %.5f", len(rows) - 1, report.p)
    return report


def run_noisy_curve(config: CurveConfig) -> NoisyCurveReport:
    rows = noisy_curve(build_state(config), _spec(config), config.rate, config.duration, config.seed)
    step = _phi_step(config.phi)
    f_mean = [row.f_mean for row in rows]
    f_sigma = [row.f_sigma for row in rows]
    kwargs = {} if step is None else {'phi_step': step}
    out = [
        NoisyCurveRow(
            phi_deg=row.phi,
            f_mean=row.f_mean,
            f_sigma=row.f_sigma,
            p_mean=weighted_probability(f_mean, t, **kwargs),
            p_sigma=weighted_probability(f_sigma, t, **kwargs),
        )
        for t, row in enumerate(rows)
    ]
    return NoisyCurveReport(rows=out, p_mean=out[-1].p_mean, p_sigma=out[-1].p_sigma)


def run_montecarlo(config: MonteCarloConfig, settings: Settings) -> MonteCarloSummary:
    p, stderr = random_frame_violation_probability(
        build_state(config),
        config.samples,
        config.seed,
        chunk_size=settings.mc_chunk_size,
        workers=settings.workers,
    )
    return MonteCarloSummary(
        p=p,
        stderr=stderr,
        samples=config.samples,
        seed=config.seed,
        chunk_size=settings.mc_chunk_size,
    )


def run_counts(config: CountsConfig) -> List[CountsRow]:
    points = [(theta, phi, config.chi) for phi in config.phi for theta in config.theta]
    estimates = simulate_grid(build_state(config), points, config.rate, config.duration, config.seed)
    return [
        CountsRow(
            theta_deg=theta,
            phi_deg=phi,
            chi_deg=chi,
            s_max=est.result.s_max,
            sigma=est.result.sigma,
            classification=classify_violation(est),
        )
        for (theta, phi, chi), est in zip(points, estimates)
    ]
