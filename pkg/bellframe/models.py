import math
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, computed_field, field_validator, model_validator

MAX_GRID_POINTS = 1_000_000


def degree_range(start: float, step: float, stop: float) -> List[float]:
    """Inclusive [start : step : stop] grid in degrees, as written in the lab notebook."""
    if not all(math.isfinite(v) for v in (start, step, stop)):
        raise ValueError(f"range bounds must be finite, got {start!r}:{step!r}:{stop!r}")
    if step <= 0:
        raise ValueError(f"range step must be positive, got {step!r}")
    if stop < start:
        raise ValueError(f"range stop {stop!r} is below start {start!r}")
    count = int((stop - start) / step + 1e-9) + 1
    if count > MAX_GRID_POINTS:
        raise ValueError(f"range {start!r}:{step!r}:{stop!r} has {count} points, more than {MAX_GRID_POINTS}")
    return [round(start + i * step, 10) for i in range(count)]


def parse_degree_range(text: str) -> List[float]:
    """Parse 'start:step:stop' or a single angle into a list of degrees."""
    parts = [p.strip() for p in text.split(':')]
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise ValueError(f"cannot parse angle range {text!r}") from None
    if len(values) == 1:
        return values
    if len(values) != 3:
        raise ValueError(f"angle range must be 'start:step:stop', got {text!r}")
    return degree_range(*values)


def _strictly_increasing(values: List[float], name: str) -> List[float]:
    if not values:
        raise ValueError(f"{name} must contain at least one angle")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"{name} must be strictly increasing")
    return values


class ChshResult(BaseModel):
    model_config = {'frozen': True}

    combos: Tuple[float, float, float, float]
    s_max: float = Field(ge=0)
    best_combo_index: int = Field(ge=0, le=3)
    sigma: Optional[float] = Field(default=None, ge=0)

    def with_sigma(self, sigma: float) -> 'ChshResult':
        return self.model_copy(update={'sigma': float(sigma)})


class SamplingSpec(BaseModel):
    model_config = {'frozen': True}

    theta_grid: List[float] = Field(default_factory=lambda: degree_range(0, 10, 180))
    phi_grid: List[float] = Field(default_factory=lambda: degree_range(0, 10, 90))
    chi: float = 0.0
    chi_grid: Optional[List[float]] = None

    @field_validator('theta_grid', 'phi_grid', 'chi_grid')
    @classmethod
    def check_grid(cls, values, info):
        if values is None:
            return values
        return _strictly_increasing(values, info.field_name)

    @property
    def chis(self) -> List[float]:
        return self.chi_grid if self.chi_grid is not None else [self.chi]


class ViolationRow(BaseModel):
    phi: float
    f: float = Field(ge=0, le=1)
    mean_s: float
    violations: int
    points: List[ChshResult]


class ViolationCurve(BaseModel):
    rows: List[ViolationRow]
    cumulative: List[Tuple[int, float]] = Field(default_factory=list)

    def f_values(self) -> List[float]:
        return [row.f for row in self.rows]


class ViolationClass(str, Enum):
    VIOLATES_BY_SIGMA = 'violates_by_sigma'
    VIOLATES_MEAN_ONLY = 'violates_mean_only'
    NO_VIOLATION = 'no_violation'


class CountRecord(BaseModel):
    model_config = {'frozen': True}

    setting: Tuple[int, int]
    n_pp: int = Field(ge=0)
    n_pm: int = Field(ge=0)
    n_mp: int = Field(ge=0)
    n_mm: int = Field(ge=0)
    duration: float = Field(gt=0)
    rate: float = Field(gt=0)

    @computed_field
    @property
    def total(self) -> int:
        return self.n_pp + self.n_pm + self.n_mp + self.n_mm


class EstimatedChsh(BaseModel):
    model_config = {'frozen': True}

    e_hat: Tuple[Tuple[float, float], Tuple[float, float]]
    sigma_e: Tuple[Tuple[float, float], Tuple[float, float]]
    result: ChshResult

    @field_validator('e_hat')
    @classmethod
    def check_correlators(cls, value):
        if any(abs(e) > 1.0 + 1e-12 for row in value for e in row):
            raise ValueError("estimated correlators must lie in [-1, 1]")
        return value

    @field_validator('sigma_e')
    @classmethod
    def check_sigmas(cls, value):
        if any(s < 0 for row in value for s in row):
            raise ValueError("correlator standard deviations must be non-negative")
        return value


class NoisyRow(BaseModel):
    phi: float
    f_mean: float = Field(ge=0, le=1)
    f_sigma: float = Field(ge=0, le=1)
    points: List[EstimatedChsh]


class MonteCarloSummary(BaseModel):
    p: float = Field(ge=0, le=1)
    stderr: float = Field(ge=0)
    samples: int
    seed: int
    chunk_size: int


# Run configuration shared by the CLI and the HTTP routers

class OutputFormat(str, Enum):
    CSV = 'csv'
    JSON = 'json'


class StateConfig(BaseModel):
    visibility: Optional[float] = Field(default=None, ge=0, le=1)
    fidelity: Optional[float] = Field(default=None, ge=0.25, le=1)

    @model_validator(mode='after')
    def exactly_one_state_model(self):
        if (self.visibility is None) == (self.fidelity is None):
            raise ValueError("give exactly one of visibility or fidelity")
        return self


class GridConfig(StateConfig):
    theta: List[float] = Field(default_factory=lambda: degree_range(0, 10, 180))
    phi: List[float] = Field(default_factory=lambda: [0.0])
    chi: float = Field(default=0.0, ge=-360, le=360)

    @field_validator('theta')
    @classmethod
    def check_theta(cls, values):
        _strictly_increasing(values, 'theta')
        if any(not -360 <= v <= 360 for v in values):
            raise ValueError("theta angles must lie in [-360, 360] degrees")
        return values

    @field_validator('phi')
    @classmethod
    def check_phi(cls, values):
        _strictly_increasing(values, 'phi')
        if any(not 0 <= v <= 90 for v in values):
            raise ValueError("phi angles must lie in [0, 90] degrees")
        return values


class ScanConfig(GridConfig):
    pass


class CurveConfig(GridConfig):
    phi: List[float] = Field(default_factory=lambda: degree_range(0, 10, 90))
    chi_grid: Optional[List[float]] = None
    noisy: bool = False
    rate: float = Field(default=1500.0, gt=0)
    duration: float = Field(default=20.0, gt=0)
    seed: int = 7

    @field_validator('phi')
    @classmethod
    def check_anchor(cls, values):
        _strictly_increasing(values, 'phi')
        if values[0] != 0:
            raise ValueError("the phi grid must start at 0 (the t = 0 anchor of the cumulative sum)")
        if len(values) > 1:
            step = values[1] - values[0]
            if any(abs((b - a) - step) > 1e-9 for a, b in zip(values, values[1:])):
                raise ValueError("the phi grid must be evenly spaced")
        return values

    @field_validator('chi_grid')
    @classmethod
    def check_chi_grid(cls, values):
        if values is None:
            return values
        _strictly_increasing(values, 'chi_grid')
        if any(not -360 <= v <= 360 for v in values):
            raise ValueError("chi_grid angles must lie in [-360, 360] degrees")
        return values


class MonteCarloConfig(StateConfig):
    samples: int = Field(default=1_000_000, ge=1)
    seed: int = 7


class CountsConfig(GridConfig):
    theta: List[float] = Field(default_factory=lambda: [0.0])
    rate: float = Field(default=1500.0, gt=0)
    duration: float = Field(default=20.0, gt=0)
    seed: int = 7


class ScanRow(BaseModel):
    theta_deg: float
    phi_deg: float
    chi_deg: float
    s_max: float
    combo_index: int
    violates: bool


class CurveRow(BaseModel):
    phi_deg: float
    f: float
    p_cumulative: float


class NoisyCurveRow(BaseModel):
    phi_deg: float
    f_mean: float
    f_sigma: float
    p_mean: float
    p_sigma: float


class CurveReport(BaseModel):
    rows: List[CurveRow]
    p: float


class NoisyCurveReport(BaseModel):
    rows: List[NoisyCurveRow]
    p_mean: float
    p_sigma: float


class CountsRow(BaseModel):
    theta_deg: float
    phi_deg: float
    chi_deg: float
    s_max: float
    sigma: float
    classification: ViolationClass
