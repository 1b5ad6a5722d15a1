"""
Common Services Package
Numerical primitives shared by the analytic and optimizer services
"""

from .numerics import (
    cubic_residual,
    gauss_laguerre,
    gauss_2f1,
    solve_cubic,
    upper_incomplete_gamma,
)

__all__ = [
    'gauss_laguerre',
    'upper_incomplete_gamma',
    'gauss_2f1',
    'solve_cubic',
    'cubic_residual',
]
