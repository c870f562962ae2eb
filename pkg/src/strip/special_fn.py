"""
Special functions for the strip factorization lab.
The Weierstrass Δ function (reciprocal Gamma) and the Euler–Mascheroni constant.
"""

import logging
import math
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from scipy.special import bernoulli, zeta

from models.domain import DeltaRoute, DeltaSettings
from .errors import DeltaOverflowError, InvalidParameterError, InvariantViolationError

logger = logging.getLogger(__name__)

EULER_SEQUENCE_N = 10_000
RICHARDSON_LEVELS = range(4, 15)
ROUTE_AGREEMENT = 1e-12
STIRLING_ORDER = 9
LOG_OVERFLOW = 709.0

_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)
_BERNOULLI = bernoulli(2 * STIRLING_ORDER)


def harmonic_number(n: int) -> float:
    """H_n = 1 + 1/2 + ... + 1/n, exactly rounded"""
    return math.fsum(1.0 / k for k in range(1, n + 1))


def euler_partial_sum(n: int) -> float:
    """H_n - log(n+1); increases toward the Euler–Mascheroni constant"""
    if n < 1:
        raise InvalidParameterError(f"partial sum needs n >= 1, got {n}")
    return harmonic_number(n) - math.log(n + 1)


def harmonic_bracket(n: int) -> Tuple[float, float]:
    """
    Bracket the Euler–Mascheroni constant between two partial sequences.

    Args:
        n: Number of harmonic terms

    Returns:
        (H_n - log(n+1), H_n - log n); the first increases and the second
        decreases toward the constant
    """
    h = harmonic_number(n)
    return h - math.log(n + 1), h - math.log(n)


def _euler_maclaurin_route(n: int) -> float:
    # tail of H_n - log n beyond c, rewritten for the log(n+1) sequence
    tail = math.log1p(1.0 / n) - 1.0 / (2 * n) + 1.0 / (12 * n**2) - 1.0 / (120 * n**4) + 1.0 / (252 * n**6)
    return euler_partial_sum(n) + tail


def _richardson_route() -> float:
    # the sequence expands in integer powers of 1/n; n doubles each level
    column = [euler_partial_sum(2**k) for k in RICHARDSON_LEVELS]
    for j in range(1, len(column)):
        factor = 2.0**j
        column = [(factor * column[i + 1] - column[i]) / (factor - 1.0) for i in range(len(column) - 1)]
    return column[0]


@lru_cache(maxsize=None)
def euler_mascheroni() -> float:
    """
    Euler–Mascheroni constant from two independent accelerations of
    lim(H_n - log(n+1)).

    Raises:
        InvariantViolationError: If the two routes disagree beyond 1e-12
    """
    corrected = _euler_maclaurin_route(EULER_SEQUENCE_N)
    extrapolated = _richardson_route()
    if abs(corrected - extrapolated) > ROUTE_AGREEMENT:
        raise InvariantViolationError(
            f"Euler–Mascheroni routes disagree: {corrected!r} vs {extrapolated!r}",
            {"corrected": corrected, "extrapolated": extrapolated},
        )
    logger.debug(f"Euler–Mascheroni constant {corrected!r} (routes differ by {abs(corrected - extrapolated):.2e})")
    return corrected


def _log_gamma_stirling(w: np.ndarray) -> np.ndarray:
    """log Γ(w) for Re w large, Stirling series through B_18"""
    log_w = np.log(w)
    result = (w - 0.5) * log_w - w + _HALF_LOG_TWO_PI
    inverse = 1.0 / w
    power = inverse
    inverse_sq = inverse * inverse
    for k in range(1, STIRLING_ORDER + 1):
        result = result + _BERNOULLI[2 * k] / (2 * k * (2 * k - 1)) * power
        power = power * inverse_sq
    return result


def _log_delta_product(w: np.ndarray, settings: DeltaSettings) -> np.ndarray:
    """log Δ(w) from the truncated product plus a Hurwitz zeta tail"""
    n_terms = settings.product_terms
    if np.any(np.abs(w) >= 0.5 * (n_terms + 1)):
        raise InvalidParameterError(
            f"product route needs |z| < {(n_terms + 1) / 2} after recursion; raise product_terms"
        )
    n = np.arange(1, n_terms + 1, dtype=float)
    ratio = w[:, None] / n[None, :]
    head = np.sum(np.log1p(ratio) - ratio, axis=1)

    tail = np.zeros_like(w)
    power = w * w
    for k in range(2, settings.tail_terms + 1):
        tail = tail + (-1) ** (k + 1) * power * zeta(k, n_terms + 1) / k
        power = power * w
    return np.log(w) + euler_mascheroni() * w + head + tail


def delta_eval(z, settings: Optional[DeltaSettings] = None):
    """
    Evaluate the entire function Δ(z) = 1/Γ(z).

    The argument is pushed right of settings.recursion_floor with
    Δ(z) = z(z+1)...(z+m-1)Δ(z+m), so the zeros at 0, -1, -2, ... come out
    exactly zero.

    Args:
        z: Complex scalar or array
        settings: Evaluation settings (defaults if omitted)

    Returns:
        Δ(z) with the shape of z (a Python complex for scalar input)

    Raises:
        DeltaOverflowError: If |Δ(z)| exceeds the double range
    """
    settings = settings or DeltaSettings()
    z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if not np.all(np.isfinite(z_arr)):
        raise InvalidParameterError("Δ needs finite arguments")

    shifts = np.maximum(0, np.ceil(settings.recursion_floor - z_arr.real)).astype(int)
    prefactor = np.ones_like(z_arr)
    for k in range(int(shifts.max(initial=0))):
        active = k < shifts
        prefactor[active] *= z_arr[active] + k
    w = z_arr + shifts

    if settings.route == DeltaRoute.PRODUCT:
        log_delta = _log_delta_product(w, settings)
    else:
        log_delta = -_log_gamma_stirling(w)

    if np.any(log_delta.real > LOG_OVERFLOW):
        worst = z_arr[int(np.argmax(log_delta.real))]
        raise DeltaOverflowError(f"Δ overflows at z = {worst}", {"z": [worst.real, worst.imag]})
    result = prefactor * np.exp(log_delta)
    if not np.all(np.isfinite(result)):
        raise DeltaOverflowError("Δ recursion prefactor overflowed")

    if np.ndim(z) == 0:
        return complex(result[0])
    return result.reshape(np.shape(z))


def delta_recursion_residual(z: complex, settings: Optional[DeltaSettings] = None) -> float:
    """Relative residual of Δ(z) = zΔ(z+1)"""
    lhs = delta_eval(z, settings)
    rhs = z * delta_eval(z + 1.0, settings)
    return abs(lhs - rhs) / (abs(lhs) + abs(rhs) + 1e-300)
