from dotenv import load_dotenv
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

# Load environment variables
load_dotenv()

from .api import graph_routes, oracle_routes  # noqa: E402
from .config import settings  # noqa: E402
from .db.redis_client import report_cache  # noqa: E402

# Create FastAPI app
app = FastAPI(
    title="Dyer Groups API",
    description="Decision procedures for Dyer groups: finiteness, centre, hyperbolicity, "
    "acylindrical hyperbolicity and abelianisation, with a coset-enumeration oracle",
    version="1.0.0",
    docs_url="/docs",
    redoc_url="/redoc",
)

# Allowed specific origins
allowed_origins = [
    "http://localhost:5173",
    "http://localhost:3000",
]
if settings.frontend_url and settings.frontend_url not in allowed_origins:
    allowed_origins.append(settings.frontend_url)

app.add_middleware(
    CORSMiddleware,
    allow_origins=allowed_origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include routers
app.include_router(graph_routes.router)
app.include_router(oracle_routes.router)


@app.get("/")
async def root():
    """Root endpoint - API status check."""
    return {
        "service": "Dyer Groups API",
        "status": "running",
        "version": "1.0.0",
        "limits": {
            "max_cosets": settings.max_cosets,
            "max_subset_vertices": settings.max_subset_vertices,
        },
        "cache": "mock" if report_cache.mock_mode else "redis",
    }


@app.get("/health")
async def health_check():
    """Health check endpoint for monitoring."""
    return {"status": "healthy"}


if __name__ == "__main__":
    import os

    import uvicorn

    port = int(os.getenv("PORT", 8000))
    host = os.getenv("HOST", "0.0.0.0")

    uvicorn.run("src.main:app", host=host, port=port, reload=True, log_level=settings.log_level.lower())
