"""
Closed-form factor pair for f(z) = z.
Δ-ratio formulas for w1, w2, their zero/pole catalog and the ratio identities.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from models.domain import DeltaSettings, GridSpec, LineSample, OracleParams
from models.reports import ZeroPoleCatalog
from .errors import DomainExclusionError, InvalidParameterError, PoleEvaluationError
from .special_fn import delta_eval

logger = logging.getLogger(__name__)

POLE_THRESHOLD = 1e-14
EXCLUSION_RADIUS = 1e-6

# (Δ shift, constant prefactor, first zero in units of α)
_COMPONENTS = {1: (0.25, 1.0 + 0.0j, 1), 2: (0.75, 1.0j, 3)}


def _component(which: int) -> Tuple[float, complex, int]:
    if which not in _COMPONENTS:
        raise InvalidParameterError(f"factor index must be 1 or 2, got {which}")
    return _COMPONENTS[which]


def nearest_pole(which: int, z: complex, p: OracleParams) -> complex:
    """Closest catalog pole of w_which to z"""
    _, _, first = _component(which)
    n = max(0, int(round((-z.imag / p.alpha - first) / 4.0)))
    return -1j * (4 * n + first) * p.alpha


def oracle_w(which: int, z, p: OracleParams, settings: Optional[DeltaSettings] = None):
    """
    Evaluate w1 or w2 of the closed-form pair for f(z) = z.

    w1(z) = e^{iγz}·Δ(βz+1/4)/Δ(-βz+1/4) and
    w2(z) = i·e^{iγz}·Δ(βz+3/4)/Δ(-βz+3/4), β = i/(4α).

    Args:
        which: 1 or 2
        z: Complex scalar or array
        p: Oracle parameters
        settings: Δ evaluation settings

    Returns:
        Values with the shape of z

    Raises:
        PoleEvaluationError: If a denominator Δ is below 1e-14 in modulus
    """
    shift, prefactor, _ = _component(which)
    z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
    argument = p.beta_c * z_arr

    denominator = np.atleast_1d(delta_eval(-argument + shift, settings))
    at_pole = np.abs(denominator) < POLE_THRESHOLD
    if np.any(at_pole):
        bad = complex(z_arr[np.argmax(at_pole)])
        pole = nearest_pole(which, bad, p)
        raise PoleEvaluationError(f"w{which} evaluated at its pole near {pole}", nearest_pole=pole)

    numerator = np.atleast_1d(delta_eval(argument + shift, settings))
    result = prefactor * np.exp(1j * p.gamma_c * z_arr) * numerator / denominator
    if np.ndim(z) == 0:
        return complex(result[0])
    return result.reshape(np.shape(z))


def oracle_line(which: int, grid: GridSpec, offset_y: float, p: OracleParams,
                settings: Optional[DeltaSettings] = None) -> LineSample:
    """Sample w_which on Im z = offset_y"""
    return LineSample(grid=grid, offset_y=offset_y,
                      values=oracle_w(which, grid.x + 1j * offset_y, p, settings))


def zero_pole_catalog(p: OracleParams, n_max: int) -> ZeroPoleCatalog:
    """Zeros (4n+1)αi, (4n+3)αi and mirrored poles for n = 0..n_max"""
    if n_max < 0:
        raise InvalidParameterError(f"n_max must be nonnegative, got {n_max}")
    n = np.arange(n_max + 1)
    w1 = [complex(0.0, (4 * k + 1) * p.alpha) for k in n]
    w2 = [complex(0.0, (4 * k + 3) * p.alpha) for k in n]
    return ZeroPoleCatalog(
        w1_zeros=w1,
        w1_poles=[-z for z in w1],
        w2_zeros=w2,
        w2_poles=[-z for z in w2],
    )


def catalog_distance(z: complex, p: OracleParams) -> float:
    """Distance from z to the nearest zero or pole of either factor"""
    # every catalog point is an odd multiple of αi
    k = np.round((z.imag / p.alpha - 1.0) / 2.0)
    nearest = (2.0 * k + 1.0) * p.alpha
    return float(np.hypot(z.real, z.imag - nearest))


def oracle_ratio_residual(z: complex, p: OracleParams,
                          settings: Optional[DeltaSettings] = None) -> Tuple[float, float]:
    """
    Relative residuals of w1(z)/w2(z-2αi) = z-αi and w2(z)/w1(z-2αi) = z-αi.

    Raises:
        DomainExclusionError: If z or z-2αi lies within 1e-6 of the catalog
    """
    z = complex(z)
    lowered = z - 2j * p.alpha
    for point in (z, lowered):
        if catalog_distance(point, p) < EXCLUSION_RADIUS:
            raise DomainExclusionError(f"{point} is within {EXCLUSION_RADIUS} of a catalog zero or pole")

    target = z - 1j * p.alpha
    first = oracle_w(1, z, p, settings) / oracle_w(2, lowered, p, settings)
    second = oracle_w(2, z, p, settings) / oracle_w(1, lowered, p, settings)
    scale = abs(target)
    return abs(first - target) / scale, abs(second - target) / scale


def seeded_interior_points(p: OracleParams, count: int, seed: int) -> np.ndarray:
    """Pseudo-random points in [-5,5]×[-2α,2α] clear of the catalog"""
    rng = np.random.default_rng(seed)
    points = []
    while len(points) < count:
        z = complex(rng.uniform(-5.0, 5.0), rng.uniform(-2.0 * p.alpha, 2.0 * p.alpha))
        if min(catalog_distance(z, p), catalog_distance(z - 2j * p.alpha, p)) > 10 * EXCLUSION_RADIUS:
            points.append(z)
    return np.array(points)
