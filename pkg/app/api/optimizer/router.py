import logging

from fastapi import APIRouter, HTTPException, status

from app.core.errors import ConvergenceError, NoSolutionError
from app.schemas.optimization import OptimizationRequest, OptimizationResponse
from app.services.optimizer_service import optimizer_service


logger = logging.getLogger(__name__)

router = APIRouter(prefix="/optimizer", tags=["optimizer"])


@router.post("", response_model=OptimizationResponse)
async def optimize_density(request: OptimizationRequest):
    """
    EE-maximizing BS density for the requested network type
    """
    try:
        result = optimizer_service.optimize(request.network, request.power, request.mode, lambda0=request.lambda0)
        return OptimizationResponse(result=result, cell_radius_m=result.cell_radius)

    except ValueError as exc:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(exc))
    except ConvergenceError as exc:
        logger.warning(f"Optimizer did not converge: {exc}")
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail={"message": str(exc), "last_iterate": exc.last_iterate, "residual": exc.residual},
        )
    except NoSolutionError as exc:
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(exc))
    except HTTPException:
        raise
    except Exception as exc:
        logger.error(f"Density optimization failed: {exc}")
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail="Failed to optimize the BS density. Please try again.",
        )
