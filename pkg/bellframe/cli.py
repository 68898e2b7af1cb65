"""Command-line front end: scan, curve, montecarlo, counts.

Exit codes: 0 success, 1 I/O error, 2 validation error.
"""
import csv
import io
import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional, Sequence

import orjson
import typer
from pydantic import BaseModel, ValidationError

from .deps import configure_logging, get_settings
from .exceptions import BellframeError
from .models import (
    CountsConfig,
    CurveConfig,
    MonteCarloConfig,
    OutputFormat,
    ScanConfig,
    parse_degree_range,
)
from .runs import run_counts, run_curve, run_montecarlo, run_noisy_curve, run_scan

logger = logging.getLogger(__name__)

EXIT_IO = 1
EXIT_VALIDATION = 2

app = typer.Typer(
    help="CHSH violation statistics for partially shared reference frames.",
    no_args_is_help=True,
    add_completion=False,
)

_settings = get_settings()

VisibilityOpt = typer.Option(None, '--visibility', help="Werner visibility V in [0, 1].")
FidelityOpt = typer.Option(None, '--fidelity', help="Singlet fidelity F in [1/4, 1]; V = (4F - 1)/3.")
OutOpt = typer.Option(None, '--out', help="Output file (default: stdout).")
FormatOpt = typer.Option(OutputFormat.CSV, '--format', help="Output format.")


class UsageError(Exception):
    pass


@app.callback()
def main(
    log_level: str = typer.Option(_settings.log_level, '--log-level', help="Logging level (stderr)."),
):
    configure_logging(log_level)


@contextmanager
def _guard() -> Iterator[None]:
    try:
        yield
    except (ValidationError, BellframeError, UsageError) as exc:
        typer.echo(f"error: {exc}", err=True)
        raise typer.Exit(code=EXIT_VALIDATION)
    except OSError as exc:
        typer.echo(f"error: {exc}", err=True)
        raise typer.Exit(code=EXIT_IO)


def _angles(text: str, name: str) -> List[float]:
    try:
        return parse_degree_range(text)
    except ValueError as exc:
        raise UsageError(f"--{name}: {exc}") from None


def _fmt(value) -> str:
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    if hasattr(value, 'value'):
        return str(value.value)
    return str(value)


def _csv(rows: Sequence[BaseModel], fields: Sequence[str], footer: Optional[str] = None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(fields)
    for row in rows:
        data = row.model_dump()
        writer.writerow([_fmt(data[name]) for name in fields])
    if footer:
        buf.write(footer + '\n')
    return buf.getvalue()


def _json(payload) -> str:
    return orjson.dumps(payload, option=orjson.OPT_SORT_KEYS).decode() + '\n'


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    out.write_text(text, encoding='utf-8', newline='')
    logger.info("wrote %s", out)


def _dump_rows(rows: Sequence[BaseModel]) -> list:
    return [row.model_dump(mode='json') for row in rows]


@app.command('scan')
def cmd_scan(
    visibility: Optional[float] = VisibilityOpt,
    fidelity: Optional[float] = FidelityOpt,
    theta: str = typer.Option('0:10:180', '--theta', help="Theta grid, start:step:stop in degrees."),
    phi: str = typer.Option('0', '--phi', help="Phi grid, start:step:stop in degrees (0 to 90)."),
    chi: float = typer.Option(0.0, '--chi', help="Final Y rotation in degrees."),
    out: Optional[Path] = OutOpt,
    fmt: OutputFormat = FormatOpt,
):
    """CHSH value at every (theta, phi) point."""
    with _guard():
        config = ScanConfig(
            visibility=visibility,
            fidelity=fidelity,
            theta=_angles(theta, 'theta'),
            phi=_angles(phi, 'phi'),
            chi=chi,
        )
        rows = run_scan(config)
        fields = ['theta_deg', 'phi_deg', 'chi_deg', 's_max', 'combo_index', 'violates']
        text = _csv(rows, fields) if fmt is OutputFormat.CSV else _json(_dump_rows(rows))
        _emit(text, out)


@app.command('curve')
def cmd_curve(
    visibility: Optional[float] = VisibilityOpt,
    fidelity: Optional[float] = FidelityOpt,
    theta: str = typer.Option('0:10:180', '--theta', help="Theta grid, start:step:stop in degrees."),
    phi: str = typer.Option('0:10:90', '--phi', help="Phi grid; must start at 0 and be evenly spaced."),
    chi: float = typer.Option(0.0, '--chi', help="Final Y rotation in degrees (ignored with --chi-grid)."),
    chi_grid: Optional[str] = typer.Option(None, '--chi-grid', help="Also sample chi over this grid."),
    noisy: bool = typer.Option(False, '--noisy', help="Simulate photon counts and report the one-sigma curve."),
    rate: float = typer.Option(_settings.default_rate, '--rate', help="Pair rate per second (--noisy)."),
    duration: float = typer.Option(_settings.default_duration, '--duration', help="Seconds per setting (--noisy)."),
    seed: int = typer.Option(_settings.default_seed, '--seed', help="Root seed (--noisy)."),
    out: Optional[Path] = OutOpt,
    fmt: OutputFormat = FormatOpt,
):
    """Violation fraction per phi and the cumulative probability p(t)."""
    with _guard():
        config = CurveConfig(
            visibility=visibility,
            fidelity=fidelity,
            theta=_angles(theta, 'theta'),
            phi=_angles(phi, 'phi'),
            chi=chi,
            chi_grid=_angles(chi_grid, 'chi-grid') if chi_grid else None,
            noisy=noisy,
            rate=rate,
            duration=duration,
            seed=seed,
        )
        t_max = len(config.phi) - 1
        if config.noisy:
            report = run_noisy_curve(config)
            fields = ['phi_deg', 'f_mean', 'f_sigma', 'p_mean', 'p_sigma']
            footer = f"# p_mean(t={t_max})={report.p_mean!r} p_sigma(t={t_max})={report.p_sigma!r}"
        else:
            report = run_curve(config)
            fields = ['phi_deg', 'f', 'p_cumulative']
            footer = f"# p(t={t_max})={report.p!r}"
        if fmt is OutputFormat.CSV:
            text = _csv(report.rows, fields, footer=footer)
        else:
            text = _json(report.model_dump(mode='json'))
        _emit(text, out)


@app.command('montecarlo')
def cmd_montecarlo(
    visibility: Optional[float] = VisibilityOpt,
    fidelity: Optional[float] = FidelityOpt,
    samples: int = typer.Option(_settings.default_samples, '--samples', help="Number of random frames."),
    seed: int = typer.Option(_settings.default_seed, '--seed', help="Root seed."),
    out: Optional[Path] = OutOpt,
    fmt: OutputFormat = typer.Option(OutputFormat.JSON, '--format', help="Output format."),
):
    """Violation probability for uniformly random relative frames."""
    with _guard():
        config = MonteCarloConfig(visibility=visibility, fidelity=fidelity, samples=samples, seed=seed)
        summary = run_montecarlo(config, _settings)
        if fmt is OutputFormat.JSON:
            text = _json(summary.model_dump(mode='json'))
        else:
            text = _csv([summary], ['p', 'stderr', 'samples', 'seed', 'chunk_size'])
        _emit(text, out)


@app.command('counts')
def cmd_counts(
    visibility: Optional[float] = VisibilityOpt,
    fidelity: Optional[float] = FidelityOpt,
    theta: str = typer.Option('0', '--theta', help="Theta grid, start:step:stop in degrees."),
    phi: str = typer.Option('0', '--phi', help="Phi grid, start:step:stop in degrees."),
    chi: float = typer.Option(0.0, '--chi', help="Final Y rotation in degrees."),
    rate: float = typer.Option(_settings.default_rate, '--rate', help="Pair rate per second."),
    duration: float = typer.Option(_settings.default_duration, '--duration', help="Seconds per setting."),
    seed: int = typer.Option(_settings.default_seed, '--seed', help="Root seed."),
    out: Optional[Path] = OutOpt,
    fmt: OutputFormat = FormatOpt,
):
    """Simulated coincidence counts: estimated CHSH value, sigma and classification."""
    with _guard():
        config = CountsConfig(
            visibility=visibility,
            fidelity=fidelity,
            theta=_angles(theta, 'theta'),
            phi=_angles(phi, 'phi'),
            chi=chi,
            rate=rate,
            duration=duration,
            seed=seed,
        )
        rows = run_counts(config)
        fields = ['theta_deg', 'phi_deg', 'chi_deg', 's_max', 'sigma', 'classification']
        text = _csv(rows, fields) if fmt is OutputFormat.CSV else _json(_dump_rows(rows))
        _emit(text, out)


if __name__ == '__main__':
    app()
