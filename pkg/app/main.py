import logging

from app.config import settings

# Configure application-wide logging
logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL, logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[
        logging.StreamHandler(),
    ]
)
logger = logging.getLogger(__name__)

from contextlib import asynccontextmanager
from datetime import datetime

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
import uvicorn

from app.api.analysis.router import router as analysis_router
from app.api.optimizer.router import router as optimizer_router
from app.api.simulation.router import router as simulation_router
from app.services.common.numerics import gauss_laguerre


@asynccontextmanager
async def lifespan(app: FastAPI):
    # the default rule is cached, so the first analysis request does not pay for it
    rule = gauss_laguerre(settings.QUAD_ORDER)
    logger.info(
        f"Planner ready: Gauss-Laguerre order {rule.order}, density bracket "
        f"[{settings.LAMBDA_MIN:g}, {settings.LAMBDA_MAX:g}] /m^2, HTTP trial cap {settings.API_MAX_TRIALS}"
    )
    yield


app = FastAPI(
    title=settings.APP_NAME,
    version=settings.APP_VERSION,
    description="Coverage, energy efficiency and optimal BS density of ISAC cellular networks",
    docs_url="/docs" if settings.DEBUG else None,
    redoc_url="/redoc" if settings.DEBUG else None,
    lifespan=lifespan,
)


@app.exception_handler(RequestValidationError)
async def validation_exception_handler(request: Request, exc: RequestValidationError):
    # network/power bodies fail here when a topology rule is broken (e.g. n_tx >= n_rx)
    logger.warning(f"Rejected request to {request.url.path}: {len(exc.errors())} validation error(s)")
    return JSONResponse(status_code=422, content={"detail": exc.errors()})


app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.ALLOWED_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(analysis_router, prefix="/api/v1")
app.include_router(optimizer_router, prefix="/api/v1")
app.include_router(simulation_router, prefix="/api/v1")


@app.get("/")
async def root():
    """
    Planner information and entry points
    """
    return {
        "message": settings.APP_NAME,
        "version": settings.APP_VERSION,
        "endpoints": ["/api/v1/analysis", "/api/v1/optimizer", "/api/v1/simulation"],
        "docs": "/docs" if settings.DEBUG else "disabled in production",
    }


@app.get("/health")
async def health_check():
    """
    Health check with the solver settings in effect
    """
    return {
        "status": "healthy",
        "timestamp": datetime.utcnow().isoformat() + "Z",
        "version": settings.APP_VERSION,
        "quad_order": settings.QUAD_ORDER,
        "lambda_bracket": list(settings.lambda_bracket),
    }


if __name__ == "__main__":
    uvicorn.run("app.main:app", host="0.0.0.0", port=8000, reload=settings.DEBUG)
