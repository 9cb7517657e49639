from fastapi import APIRouter

from ..config import settings
from ..models.schemas import OracleRequest, OracleResponse
from ..services import oracle
from ..services.errors import CapExceededError
from .common import parse_or_raise

router = APIRouter(prefix="/api/oracle", tags=["oracle"])

# Hitting the coset cap is an answer here, not an error


def _cap(request: OracleRequest) -> int:
    return settings.max_cosets if request.max_cosets is None else request.max_cosets


@router.post("/order", response_model=OracleResponse)
def oracle_order(request: OracleRequest):
    g = parse_or_raise(request.text)
    cap = _cap(request)
    try:
        return OracleResponse(status="complete", value=oracle.brute_order(g, cap), max_cosets=cap)
    except CapExceededError:
        return OracleResponse(status="cap_exceeded", max_cosets=cap)


@router.post("/centre", response_model=OracleResponse)
def oracle_centre(request: OracleRequest):
    g = parse_or_raise(request.text)
    cap = _cap(request)
    try:
        table = oracle.todd_coxeter(oracle.presentation_of(g, cap), cap)
    except CapExceededError:
        return OracleResponse(status="cap_exceeded", max_cosets=cap)
    if not table.complete:
        return OracleResponse(status="cap_exceeded", max_cosets=cap)
    return OracleResponse(status="complete", value=oracle.brute_centre_order(table), max_cosets=cap)


@router.post("/abelian", response_model=OracleResponse)
def oracle_abelian(request: OracleRequest):
    g = parse_or_raise(request.text)
    cap = _cap(request)
    try:
        value = oracle.brute_abelianisation_order(g, cap)
    except CapExceededError:
        return OracleResponse(status="cap_exceeded", max_cosets=cap)
    return OracleResponse(status="complete", value=value, max_cosets=cap)
