import logging
from typing import Optional

from fastapi import APIRouter, File, HTTPException, UploadFile, status

from ..config import settings
from ..db.redis_client import report_cache, report_key
from ..models.schemas import DecomposeResponse, DyerGraph, GraphTextRequest, LiftResponse
from ..services.classify import analyze
from ..services.dyer_graph import irreducible_components, partition_vertices, serialize_graph
from ..services.errors import DyerError
from ..services.lift import index_factor, lift_graph
from .common import http_error, parse_or_raise

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api/graphs", tags=["graphs"])


def _cached_report(g: DyerGraph, max_subset_vertices: Optional[int]) -> dict:
    """
    Full analysis report, served from the report cache when possible.
    Checks the cache first, then computes and stores the JSON document.
    """
    cap = settings.max_subset_vertices if max_subset_vertices is None else max_subset_vertices
    cache_key = report_key(serialize_graph(g), cap)
    cached_report = report_cache.get(cache_key)
    if cached_report:
        logger.debug("Report cache hit %s", cache_key)
        return cached_report

    try:
        report = analyze(g, cap).model_dump(mode="json", exclude_none=True)
    except DyerError as e:
        raise http_error(e)

    report_cache.set(cache_key, report)
    return report


@router.post("/validate")
def validate_graph(request: GraphTextRequest):
    """Parse and validate a graph, echoing its canonical text and JSON forms."""
    g = parse_or_raise(request.text)
    return {
        "valid": True,
        "text": serialize_graph(g),
        "graph": g.model_dump(mode="json"),
    }


@router.post("/analyze")
def analyze_graph(request: GraphTextRequest):
    """
    Run every decision procedure on a graph:
    - finiteness, order, centre and abelianisation
    - hyperbolicity with a witness when it fails
    - acylindrical hyperbolicity
    """
    g = parse_or_raise(request.text)
    return _cached_report(g, request.max_subset_vertices)


@router.post("/analyze/upload")
async def analyze_upload(file: UploadFile = File(...), max_subset_vertices: Optional[int] = None):
    """Same as /analyze for a .dyer file sent as multipart form data."""
    try:
        text = (await file.read()).decode("utf-8")
    except UnicodeDecodeError:
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail=f"{file.filename} is not UTF-8 text",
        )
    g = parse_or_raise(text)
    return _cached_report(g, max_subset_vertices)


@router.post("/decompose", response_model=DecomposeResponse)
def decompose_graph(request: GraphTextRequest):
    g = parse_or_raise(request.text)
    return DecomposeResponse(components=irreducible_components(g), partition=partition_vertices(g))


@router.post("/lift", response_model=LiftResponse)
def lift(request: GraphTextRequest):
    """Coxeter lift of the graph. Twin vertices carry a trailing prime, so the text is display-only."""
    g = parse_or_raise(request.text)
    result = lift_graph(g)
    return LiftResponse(
        text=serialize_graph(result.lifted),
        k=result.k,
        index=index_factor(g),
        prime_of=result.prime_of,
    )
