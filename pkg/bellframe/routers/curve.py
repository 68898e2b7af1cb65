from typing import Union

from fastapi import APIRouter

from bellframe.models import CurveConfig, CurveReport, NoisyCurveReport
from bellframe.routers.errors import domain_errors
from bellframe.runs import run_curve, run_noisy_curve

router = APIRouter(
    prefix='/curve',
    tags=['curve']
)


@router.post('/', response_model=Union[NoisyCurveReport, CurveReport])
def violation_curve(config: CurveConfig):
    with domain_errors():
        if config.noisy:
            return run_noisy_curve(config)
        return run_curve(config)
