from typing import List

from fastapi import APIRouter

from bellframe.models import ScanConfig, ScanRow
from bellframe.routers.errors import domain_errors
from bellframe.runs import run_scan

router = APIRouter(
    prefix='/scan',
    tags=['scan']
)


@router.post('/', response_model=List[ScanRow])
def scan_grid(config: ScanConfig):
    with domain_errors():
        return run_scan(config)
