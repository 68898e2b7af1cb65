from contextlib import contextmanager

from fastapi import HTTPException, status

from bellframe.exceptions import BellframeError, InsufficientDataError


@contextmanager
def domain_errors():
    """Turn simulator errors into HTTP responses."""
    try:
        yield
    except InsufficientDataError as exc:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(exc))
    except BellframeError as exc:
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(exc))
