import logging

from fastapi import APIRouter, HTTPException, status

from app.core.errors import DomainError
from app.schemas.analysis import AnalysisRequest, AnalysisResult
from app.services.analytic_service import analytic_service
from app.services.common.numerics import gauss_laguerre


logger = logging.getLogger(__name__)

router = APIRouter(prefix="/analysis", tags=["analysis"])


@router.post("", response_model=AnalysisResult)
async def analyze_network(request: AnalysisRequest):
    """
    Closed-form coverage, PSE and energy efficiency of one configuration
    """
    try:
        return analytic_service.analyze(
            request.network,
            request.power,
            rule=gauss_laguerre(request.quad_order),
            mapping=request.mapping,
        )

    except (ValueError, DomainError) as exc:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(exc))
    except HTTPException:
        raise
    except Exception as exc:
        logger.error(f"Analysis failed: {exc}")
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail="Failed to evaluate the network. Please try again.",
        )
