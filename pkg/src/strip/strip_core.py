"""
Grid and strip core for the strip factorization lab.
Sampling on horizontal lines, Gaussian-weighted norms and spectral continuation.
"""

import logging
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid

from models.domain import AnalyticFnSpec, GridSpec, LineSample, StripDomain
from models.reports import MembershipReport
from .errors import IllPosedContinuationError, InvalidParameterError

logger = logging.getLogger(__name__)

# natural log of the largest finite double
CONTINUATION_GUARD = 700.0
NORM_OVERFLOW = 1e200


class BoundaryApproach(str, Enum):
    """Edge of the strip approached by boundary_convergence_check"""
    UPPER = "upper"
    LOWER = "lower"


def sample_line(f: AnalyticFnSpec, grid: GridSpec, offset_y: float) -> LineSample:
    """Sample f on Im z = offset_y at the grid points"""
    return LineSample(grid=grid, offset_y=offset_y, values=f.evaluate(grid.x + 1j * offset_y))


def gaussian_weighted_norm(line: LineSample, gamma: float) -> float:
    """
    Trapezoid estimate of ∫|h(x+yi)|² e^{-2γx²} dx on one sampled line.

    Args:
        line: Sampled line
        gamma: Gaussian weight parameter, must be positive

    Returns:
        Nonnegative weighted integral

    Raises:
        InvalidParameterError: If gamma <= 0
    """
    if gamma <= 0:
        raise InvalidParameterError(f"gamma must be positive, got {gamma}")
    x = line.grid.x
    integrand = np.abs(line.values) ** 2 * np.exp(-2.0 * gamma * x * x)
    return float(trapezoid(integrand, dx=line.grid.spacing))


def _check_gammas(gammas: Sequence[float], dom: StripDomain) -> None:
    for gamma in gammas:
        if gamma <= dom.epsilon or gamma <= 0:
            raise InvalidParameterError(f"gamma must exceed epsilon={dom.epsilon}, got {gamma}")


def class_membership_estimate(f: AnalyticFnSpec, dom: StripDomain, grid: GridSpec,
                              gammas: Sequence[float], n_lines: int) -> MembershipReport:
    """
    Estimate sup over interior lines of the weighted norm, per gamma.

    The verdict is 'finite' when every sampled maximum stays below the
    overflow threshold.

    Raises:
        InvalidParameterError: If some gamma <= epsilon or n_lines < 2
    """
    if n_lines < 2:
        raise InvalidParameterError(f"need at least two lines, got {n_lines}")
    _check_gammas(gammas, dom)

    offsets = dom.interior_lines(n_lines)
    lines = [sample_line(f, grid, float(y)) for y in offsets]
    sup_norms = {}
    for gamma in gammas:
        norms = [gaussian_weighted_norm(line, gamma) for line in lines]
        sup_norms[float(gamma)] = float(np.max(norms))

    finite = all(np.isfinite(v) and v < NORM_OVERFLOW for v in sup_norms.values())
    logger.info(f"Membership of {f.label} in strip ({dom.lower}, {dom.upper}): "
                f"{'finite' if finite else 'overflow'} over {n_lines} lines")
    return MembershipReport(sup_norms=sup_norms, lines=[float(y) for y in offsets],
                            verdict="finite" if finite else "overflow")


def analytic_shift(line: LineSample, delta_y: float, noise_floor: Optional[float] = None) -> LineSample:
    """
    Continue a sampled line to Im z = offset_y + delta_y.

    Each mode e^{iξx} becomes e^{iξx}·e^{-ξ·delta_y}. Exact for trigonometric
    polynomials commensurate with the window.

    Args:
        line: Sampled line
        delta_y: Vertical shift
        noise_floor: If set, modes whose amplitude is below it are dropped
            before amplification

    Returns:
        LineSample on the shifted line

    Raises:
        IllPosedContinuationError: If max |ξ·delta_y| exceeds the guard
    """
    if delta_y == 0.0:
        return LineSample(grid=line.grid, offset_y=line.offset_y, values=line.values.copy())

    xi = line.grid.frequencies
    exponent = -xi * delta_y
    worst = int(np.argmax(exponent))
    if exponent[worst] > CONTINUATION_GUARD:
        raise IllPosedContinuationError(
            f"continuation by {delta_y} amplifies frequency {xi[worst]:.6g} beyond e^{CONTINUATION_GUARD:g}",
            frequency=float(xi[worst]),
        )

    spectrum = np.fft.fft(line.values)
    if noise_floor is not None:
        tiny = (np.abs(spectrum) / line.grid.n < noise_floor) & (exponent > 0)
        spectrum[tiny] = 0.0
    shifted = np.fft.ifft(spectrum * np.exp(exponent))
    return LineSample(grid=line.grid, offset_y=line.offset_y + delta_y, values=shifted)


def boundary_convergence_check(f: AnalyticFnSpec, dom: StripDomain, grid: GridSpec, gamma: float,
                               approach: BoundaryApproach, steps: int) -> List[float]:
    """
    Weighted distances between interior lines and one boundary line.

    Offsets halve their distance to the chosen edge each step, starting at the
    strip's midline.

    Returns:
        One weighted distance per step (empty for steps == 0)
    """
    _check_gammas([gamma], dom)
    if steps <= 0:
        return []

    approach = BoundaryApproach(approach)
    edge = dom.upper if approach == BoundaryApproach.UPPER else dom.lower
    sign = -1.0 if approach == BoundaryApproach.UPPER else 1.0
    half_width = 0.5 * (dom.upper - dom.lower)
    boundary = f.evaluate(grid.x + 1j * edge)

    distances = []
    for k in range(steps):
        y = edge + sign * half_width * 0.5**k
        difference = LineSample(grid=grid, offset_y=y, values=f.evaluate(grid.x + 1j * y) - boundary)
        distances.append(gaussian_weighted_norm(difference, gamma))
    return distances


def central_max(values: np.ndarray, grid: GridSpec) -> float:
    """Max modulus over the central half-window"""
    return float(np.max(np.abs(values[grid.central_half])))


def relative_error(actual: np.ndarray, expected: np.ndarray, grid: GridSpec) -> float:
    """Max relative pointwise error on the central half-window"""
    window = grid.central_half
    scale = np.abs(expected[window])
    return float(np.max(np.abs(actual[window] - expected[window]) / np.maximum(scale, 1e-300)))
