"""
Array processing: ULA steering vectors, ZF precoding and the MVDR receive filter
"""
import math
from typing import Tuple

import numpy as np
from scipy import linalg

from app.core.errors import NumericalError, ParameterError

MAX_CONDITION = 1e12
DIAGONAL_LOADING = 1e-9


def steering_vector(theta: float, n_elements: int) -> np.ndarray:
    """Half-wavelength ULA response exp(j pi m sin(theta)), m = 0..n-1"""
    if n_elements < 1:
        raise ParameterError(f"Array needs at least one element, got {n_elements}")
    if not -math.pi / 2 - 1e-12 <= theta <= math.pi / 2 + 1e-12:
        raise ParameterError(f"Steering angle must lie in [-pi/2, pi/2], got {theta}")
    return np.exp(1j * math.pi * np.arange(n_elements) * math.sin(theta))


def rayleigh_channel(rng: np.random.Generator, *shape: int) -> np.ndarray:
    """i.i.d. CN(0, 1) entries"""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def zf_precoder(channel_matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Zero-forcing precoder for a kappa x N_t downlink channel.

    F = pinv(H) = H^H (H H^H)^-1; returns (W, varsigma) with unit-norm columns
    w_k = f_k / ||f_k|| and effective gains varsigma_k = 1 / ||f_k||^2. Works on a
    single matrix or a stack of shape (..., kappa, N_t).
    """
    h = np.asarray(channel_matrix, dtype=complex)
    gram = h @ np.swapaxes(h.conj(), -1, -2)
    condition = np.linalg.cond(gram)
    if np.any(~np.isfinite(condition)) or np.any(condition > MAX_CONDITION):
        raise NumericalError(f"Channel Gram matrix is numerically singular (condition {np.max(condition):.3e})")
    f = np.linalg.pinv(h)
    norms = np.linalg.norm(f, axis=-2)
    return f / norms[..., None, :], 1.0 / norms ** 2


def mvdr_filter(covariance: np.ndarray, steering: np.ndarray) -> np.ndarray:
    """
    w = R^-1 a / (a^H R^-1 a) after diagonal loading of 1e-9 trace(R)/N_r.
    Raises NumericalError when the loaded covariance is not positive definite.
    """
    r = np.asarray(covariance, dtype=complex)
    a = np.asarray(steering, dtype=complex)
    n = r.shape[0]
    if r.shape != (n, n) or a.shape != (n,):
        raise ParameterError("Covariance must be square and match the steering vector length")

    loading = DIAGONAL_LOADING * float(np.real(np.trace(r))) / n
    loaded = 0.5 * (r + r.conj().T) + loading * np.eye(n)
    try:
        factor = linalg.cho_factor(loaded)
    except linalg.LinAlgError as exc:
        raise NumericalError("Interference covariance is not positive definite") from exc
    x = linalg.cho_solve(factor, a)
    return x / np.vdot(a, x)


def output_power(weights: np.ndarray, covariance: np.ndarray) -> float:
    """w^H R w"""
    return float(np.real(np.vdot(weights, covariance @ weights)))
