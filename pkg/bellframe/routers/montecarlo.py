from fastapi import APIRouter, HTTPException, status

from bellframe.deps import settings_dependency
from bellframe.models import MonteCarloConfig, MonteCarloSummary
from bellframe.routers.errors import domain_errors
from bellframe.runs import run_montecarlo

router = APIRouter(
    prefix='/montecarlo',
    tags=['montecarlo']
)


@router.post('/', response_model=MonteCarloSummary)
def random_frames(config: MonteCarloConfig, settings: settings_dependency):
    if config.samples > settings.max_samples:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=f"samples limited to {settings.max_samples} per request"
        )
    with domain_errors():
        return run_montecarlo(config, settings)
