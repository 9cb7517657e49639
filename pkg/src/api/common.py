import logging

from fastapi import HTTPException, status

from ..models.schemas import DyerGraph
from ..services.dyer_graph import parse_graph
from ..services.errors import CapExceededError, DyerError, GraphSyntaxError, GraphValidationError

logger = logging.getLogger(__name__)


def http_error(e: DyerError) -> HTTPException:
    if isinstance(e, GraphSyntaxError):
        return HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
    if isinstance(e, GraphValidationError):
        return HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))
    if isinstance(e, CapExceededError):
        return HTTPException(status_code=status.HTTP_413_REQUEST_ENTITY_TOO_LARGE, detail=str(e))
    logger.error("Unexpected service error: %s", e)
    return HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))


def parse_or_raise(text: str) -> DyerGraph:
    try:
        return parse_graph(text)
    except DyerError as e:
        raise http_error(e)
