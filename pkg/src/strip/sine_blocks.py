"""
Closed-form factor pair for f(z) = 2·sin(βz), β > 0.
Ratios of q-Pochhammer products with q0 = e^{-2αβ}.
"""

import logging

import numpy as np

from .errors import InvalidParameterError, PoleEvaluationError

logger = logging.getLogger(__name__)

POLE_THRESHOLD = 1e-14
PRODUCT_TOLERANCE = 1e-18


def q_pochhammer(a, q: float) -> np.ndarray:
    """(a; q)_∞ = Π_{k>=0} (1 - a·q^k) for 0 < q < 1, truncated at machine precision"""
    if not 0.0 < q < 1.0:
        raise InvalidParameterError(f"q-Pochhammer needs 0 < q < 1, got {q}")
    a = np.asarray(a, dtype=complex)
    largest = max(float(np.max(np.abs(a), initial=0.0)), 1.0)
    terms = int(np.ceil(np.log(PRODUCT_TOLERANCE / largest) / np.log(q))) + 1
    result = np.ones(a.shape, dtype=complex)
    power = 1.0
    for _ in range(max(terms, 1)):
        result = result * (1.0 - a * power)
        power *= q
    return result


def block_slope(which: int, beta: float) -> float:
    """Affine phase coefficient: +β/2 for w1, -β/2 for w2"""
    return 0.5 * beta if which == 1 else -0.5 * beta


def sine_block(which: int, z, beta: float, alpha: float) -> np.ndarray:
    """
    Evaluate w1 or w2 of the pair for 2·sin(βz).

    w1(z) = e^{iβz/2}·(q0·e^{-2iβz}; q0⁴)/(q0·e^{2iβz}; q0⁴)
    w2(z) = i·e^{-iβz/2}·(q0³·e^{-2iβz}; q0⁴)/(q0³·e^{2iβz}; q0⁴)

    Zeros sit at mπ/β + (4n+1)αi for w1 and mπ/β + (4n+3)αi for w2; the poles
    are their mirror images.

    Raises:
        PoleEvaluationError: If a denominator product vanishes
    """
    if beta <= 0 or alpha <= 0:
        raise InvalidParameterError(f"sine block needs beta > 0 and alpha > 0, got {beta}, {alpha}")
    if which not in (1, 2):
        raise InvalidParameterError(f"factor index must be 1 or 2, got {which}")

    z = np.asarray(z, dtype=complex)
    q0 = np.exp(-2.0 * alpha * beta)
    power = 1 if which == 1 else 3
    base = q0**power
    rotation = np.exp(2j * beta * z)

    denominator = q_pochhammer(base * rotation, q0**4)
    if np.any(np.abs(denominator) < POLE_THRESHOLD):
        bad = complex(np.ravel(z)[np.argmin(np.abs(np.ravel(denominator)))])
        m = np.round(bad.real * beta / np.pi)
        n = max(0, int(np.round((-bad.imag / alpha - power) / 4.0)))
        pole = complex(m * np.pi / beta, -(4 * n + power) * alpha)
        raise PoleEvaluationError(f"sine block w{which} evaluated at its pole near {pole}", nearest_pole=pole)

    numerator = q_pochhammer(base / rotation, q0**4)
    prefactor = np.exp(1j * block_slope(which, beta) * z)
    if which == 2:
        prefactor = 1j * prefactor
    return prefactor * numerator / denominator
