import logging

from fastapi import APIRouter, HTTPException, status

from app.config import settings
from app.schemas.simulation import MetricEstimates, SimulationRequest
from app.services.montecarlo import estimate_metrics


logger = logging.getLogger(__name__)

router = APIRouter(prefix="/simulation", tags=["simulation"])


@router.post("", response_model=MetricEstimates)
def simulate_network(request: SimulationRequest):
    """
    Monte Carlo coverage, PSE and EE with 95% confidence intervals.
    Runs in the threadpool; trials are capped by API_MAX_TRIALS.
    """
    if request.trials > settings.API_MAX_TRIALS:
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail=f"At most {settings.API_MAX_TRIALS} trials can be requested over HTTP; use the CLI for larger runs",
        )

    seed = request.seed if request.seed is not None else settings.MC_SEED
    try:
        return estimate_metrics(request.network, request.power, request.trials, seed, workers=1)

    except ValueError as exc:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(exc))
    except Exception as exc:
        logger.error(f"Simulation failed: {exc}")
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail="Failed to simulate the network. Please try again.",
        )
