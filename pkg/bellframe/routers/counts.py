from typing import List

from fastapi import APIRouter

from bellframe.models import CountsConfig, CountsRow
from bellframe.routers.errors import domain_errors
from bellframe.runs import run_counts

router = APIRouter(
    prefix='/counts',
    tags=['counts']
)


@router.post('/', response_model=List[CountsRow])
def simulated_counts(config: CountsConfig):
    with domain_errors():
        return run_counts(config)
