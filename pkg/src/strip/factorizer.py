"""
Boundary-unitary factorization of holomorphic functions on a strip.
Builds w1, w2 with w1(x) = f(x-αi)·w2(x-2αi) and w2(x) = f̄(x-αi)·w1(x-2αi),
then the polar decomposition f(z) = u_f(z+αi)·g_f(z).

Factors that vanish near the real axis (z and 2·sin(βz)) are taken from exact
blocks. The zero-free remainder goes through a Fourier-mode solve of the
log-linearized relations in the derivative domain.
"""

import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.signal.windows import tukey

from models.domain import (
    AnalyticFnSpec,
    BoundaryLogData,
    DeltaSettings,
    FactorPair,
    FourierModes,
    FunctionKind,
    GaugeConvention,
    GridSpec,
    LineSample,
    OracleParams,
    PhaseModel,
)
from models.reports import FactorResidual, PolarResult
from .closed_form import oracle_w
from .errors import (
    AdmissibilityError,
    FactorizationError,
    InvalidParameterError,
    InvariantViolationError,
    StripDomainError,
)
from .sine_blocks import block_slope, sine_block
from .strip_core import analytic_shift, central_max

logger = logging.getLogger(__name__)

ADMISSIBILITY_FLOOR = 1e-8
DETERMINANT_FLOOR = 1e-12
FIT_TOLERANCE = 1e-6
UNIMODULAR_TOLERANCE = 1e-9
MODE_NOISE_FLOOR = 1e-15
CONTINUATION_NOISE_FLOOR = 1e-14
PERIODICITY_TOLERANCE = 1e-10
TAPER_FRACTION = 0.5
LINE_SLACK = 1e-12


def boundary_log_data(f: AnalyticFnSpec, alpha: float, grid: GridSpec) -> BoundaryLogData:
    """
    Continuous-branch logs of f on the lines Im z = -α and Im z = +α.

    a_minus = log f(x-αi) and b_plus = conj log f(x+αi) = log f̄(x-αi). Both
    start from the principal branch at the left end of the window.

    Raises:
        AdmissibilityError: If |f| drops below 1e-8 on either line
    """
    x = grid.x
    if f.identically_zero:
        raise AdmissibilityError(f"{f.label} vanishes identically")
    for y in (-alpha, alpha):
        low, where = f.inf_abs_on_line(grid, y)
        if low < ADMISSIBILITY_FLOOR:
            raise AdmissibilityError(f"|{f.label}| = {low:.3e} at x = {where:.6g} on Im z = {y:g}",
                                     line=y, location=where)

    lower = f.evaluate(x - 1j * alpha)
    upper = np.conj(f.evaluate(x + 1j * alpha))
    a_phase = np.unwrap(np.angle(lower))
    b_phase = np.unwrap(np.angle(upper))
    return BoundaryLogData(
        grid=grid,
        alpha=alpha,
        function=f,
        a_minus=np.log(np.abs(lower)) + 1j * a_phase,
        b_plus=np.log(np.abs(upper)) + 1j * b_phase,
        winding_info={"a_minus": float(a_phase[-1] - a_phase[0]), "b_plus": float(b_phase[-1] - b_phase[0])},
    )


def _window_periodic(data: BoundaryLogData) -> bool:
    f, alpha, grid = data.function, data.alpha, data.grid
    ends = np.array([grid.origin, grid.origin + grid.length])
    for y in (-alpha, alpha):
        start, end = f.log_derivative(ends + 1j * y)
        if abs(end - start) > PERIODICITY_TOLERANCE * (1.0 + abs(start)):
            return False
    return True


def solve_fourier_modes(data: BoundaryLogData, alpha: float) -> FourierModes:
    """
    Solve the log-linearized relations per Fourier mode.

    With w_j = exp(iφ_j) and E = e^{2αξ}, every nonzero frequency satisfies
    iφ̂1 - iEφ̂2 = Â and iφ̂2 - iEφ̂1 = B̂. The solve runs on the x-derivatives
    of the log data, whose transforms decay. The ξ = 0 entry is left at zero:
    it is the free gauge constant.

    Raises:
        InvariantViolationError: If 1 - E² vanishes at a nonzero frequency
    """
    grid = data.grid
    xi = grid.frequencies
    da, db = data.derivatives()

    tapered = not _window_periodic(data)
    if tapered:
        logger.warning(f"Log-derivative data of {data.function.label} is not window periodic; applying taper")
        window = tukey(grid.n, TAPER_FRACTION)
        da = da * window
        db = db * window

    a_hat = np.fft.fft(da)
    b_hat = np.fft.fft(db)
    phi1 = np.zeros(grid.n, dtype=complex)
    phi2 = np.zeros(grid.n, dtype=complex)

    # divide through by the larger of 1 and E² so nothing overflows
    decay = np.exp(-2.0 * alpha * np.abs(xi))
    positive = xi > 0
    negative = xi < 0

    e = decay[negative]
    det = 1.0 - e * e
    if np.any(np.abs(det) < DETERMINANT_FLOOR):
        raise InvariantViolationError("singular mode system at a negative frequency")
    phi1[negative] = -1j * (a_hat[negative] + e * b_hat[negative]) / det
    phi2[negative] = -1j * (b_hat[negative] + e * a_hat[negative]) / det

    e = decay[positive]
    det = e * e - 1.0
    if np.any(np.abs(det) < DETERMINANT_FLOOR):
        raise InvariantViolationError("singular mode system at a positive frequency")
    phi1[positive] = -1j * (a_hat[positive] * e * e + b_hat[positive] * e) / det
    phi2[positive] = -1j * (b_hat[positive] * e * e + a_hat[positive] * e) / det

    return FourierModes(grid=grid, phi1_hat=phi1, phi2_hat=phi2, derivative_domain=True, tapered=tapered)


def _periodic_phase(modes_hat: np.ndarray, grid: GridSpec, derivative_domain: bool) -> np.ndarray:
    xi = grid.frequencies
    phase_hat = np.zeros(grid.n, dtype=complex)
    nonzero = xi != 0.0
    if derivative_domain:
        phase_hat[nonzero] = modes_hat[nonzero] / (1j * xi[nonzero])
    else:
        phase_hat[nonzero] = modes_hat[nonzero]
    phase_hat[np.abs(phase_hat) / grid.n < MODE_NOISE_FLOOR] = 0.0
    phase = np.fft.ifft(phase_hat)
    leak = float(np.max(np.abs(phase.imag), initial=0.0))
    if leak > 1e-8 * max(1.0, float(np.max(np.abs(phase.real), initial=0.0))):
        logger.warning(f"Periodic phase has imaginary part {leak:.2e}; log data may not be zero free")
    return phase.real


def _lowered(phase: np.ndarray, grid: GridSpec, alpha: float) -> np.ndarray:
    """phase(x - 2αi) by spectral continuation"""
    line = LineSample(grid=grid, offset_y=0.0, values=phase.astype(complex))
    return analytic_shift(line, -2.0 * alpha, noise_floor=CONTINUATION_NOISE_FLOOR).values


def _fit_affine(r2: np.ndarray, r3: np.ndarray, grid: GridSpec, alpha: float,
                fit_tolerance: float) -> Tuple[float, float, float]:
    """
    Least-squares fit of the affine remainders.

    r2 ≈ i(s1-s2)x - 2α·s2 + i·d2 and r3 ≈ i(s2-s1)x - 2α·s1 + i·d3, with
    d2 ≡ d and d3 ≡ -d modulo 2π.

    Returns:
        (s1, s2, d)
    """
    window = grid.central_half
    x = grid.x[window]
    ones = np.ones_like(x)
    zeros = np.zeros_like(x)
    # unknowns: s1, s2, d2, d3
    design = np.vstack([
        np.column_stack([zeros, -2.0 * alpha * ones, zeros, zeros]),
        np.column_stack([-2.0 * alpha * ones, zeros, zeros, zeros]),
        np.column_stack([x, -x, ones, zeros]),
        np.column_stack([-x, x, zeros, ones]),
    ])
    observed = np.concatenate([r2[window].real, r3[window].real, r2[window].imag, r3[window].imag])
    solution, *_ = np.linalg.lstsq(design, observed, rcond=None)
    misfit = float(np.max(np.abs(design @ solution - observed)))
    s1, s2, d2, d3 = (float(v) for v in solution)

    winding = (d2 + d3) / (2.0 * np.pi)
    k = int(np.round(winding))
    diagnostics = {"misfit": misfit, "slope1": s1, "slope2": s2, "d2": d2, "d3": d3}
    if misfit > fit_tolerance or abs(winding - k) * 2.0 * np.pi > fit_tolerance:
        raise FactorizationError(
            f"affine fit residual {misfit:.3e} (branch mismatch {abs(winding - k):.3e}) exceeds {fit_tolerance:g}",
            diagnostics,
        )
    d = 0.5 * (d2 - d3) + np.pi * (k % 2)
    logger.info(f"Affine fit: slope1={s1:.12g}, slope2={s2:.12g}, misfit={misfit:.2e}")
    return s1, s2, d


def _block_values(zero_factors: Sequence[AnalyticFnSpec], which: int, z: np.ndarray, alpha: float,
                  settings: Optional[DeltaSettings] = None) -> np.ndarray:
    values = np.ones(z.shape, dtype=complex)
    for factor in zero_factors:
        shifted = z - factor.shift
        if factor.kind == FunctionKind.IDENTITY:
            values = values * oracle_w(which, shifted, OracleParams(alpha=alpha), settings)
        else:
            values = values * sine_block(which, shifted, factor.beta, alpha)
    return values


def _block_slope(zero_factors: Sequence[AnalyticFnSpec], which: int, alpha: float) -> float:
    slope = 0.0
    for factor in zero_factors:
        if factor.kind == FunctionKind.IDENTITY:
            slope += OracleParams(alpha=alpha).gamma_c
        else:
            slope += block_slope(which, factor.beta)
    return slope


def fix_affine_and_gauge(modes: FourierModes, data: BoundaryLogData, alpha: float,
                         convention: GaugeConvention = GaugeConvention.PHASE_ZERO_AT_CENTER,
                         reference: Optional[np.ndarray] = None,
                         function: Optional[AnalyticFnSpec] = None,
                         zero_factors: Iterable[AnalyticFnSpec] = (),
                         fit_tolerance: float = FIT_TOLERANCE) -> FactorPair:
    """
    Turn mode arrays into a unimodular factor pair.

    Integrates the derivative-domain modes, fits the affine phase parts and the
    phase difference on the central half-window, multiplies in the exact
    blocks and fixes the gauge.

    Args:
        modes: Output of solve_fourier_modes
        data: Log data of the zero-free part
        alpha: Half width of the boundary lines
        convention: How to fix the unimodular constant
        reference: Reference w1 samples for GaugeConvention.MATCH_REFERENCE
        function: The full function being factored (defaults to data.function)
        zero_factors: Identity and 2·sin(βz) factors with β > 0, built exactly
        fit_tolerance: Largest accepted affine misfit

    Returns:
        FactorPair with fresh residual diagnostics

    Raises:
        FactorizationError: If the affine fit does not converge
    """
    grid = data.grid
    zero_factors = list(zero_factors)
    function = function or data.function

    p1 = _periodic_phase(modes.phi1_hat, grid, modes.derivative_domain)
    p2 = _periodic_phase(modes.phi2_hat, grid, modes.derivative_domain)
    r2 = data.a_minus - (1j * p1 - 1j * _lowered(p2, grid, alpha))
    r3 = data.b_plus - (1j * p2 - 1j * _lowered(p1, grid, alpha))
    s1, s2, d = _fit_affine(r2, r3, grid, alpha, fit_tolerance)

    phase1 = PhaseModel(slope=s1, intercept=d, periodic=p1)
    phase2 = PhaseModel(slope=s2, intercept=0.0, periodic=p2)
    x = grid.x.astype(complex)
    raw1 = _block_values(zero_factors, 1, x, alpha) * np.exp(1j * (s1 * grid.x + d + p1))
    raw2 = _block_values(zero_factors, 2, x, alpha) * np.exp(1j * (s2 * grid.x + p2))

    drift = max(float(np.max(np.abs(np.abs(raw1) - 1.0))), float(np.max(np.abs(np.abs(raw2) - 1.0))))
    if drift > UNIMODULAR_TOLERANCE:
        raise InvariantViolationError(f"factor pair is not unimodular on the real line (drift {drift:.2e})")
    raw1 = raw1 / np.abs(raw1)
    raw2 = raw2 / np.abs(raw2)

    center = grid.center_index
    if convention == GaugeConvention.MATCH_REFERENCE:
        if reference is None:
            raise InvalidParameterError("match-reference gauge needs reference samples")
        gauge = reference[center] / raw1[center]
    else:
        gauge = 1.0 / raw1[center]
    gauge = complex(gauge / abs(gauge))

    pair = FactorPair(
        grid=grid,
        alpha=alpha,
        function=function,
        w1_real_line=raw1,
        w2_real_line=raw2,
        slope1=s1 + _block_slope(zero_factors, 1, alpha),
        slope2=s2 + _block_slope(zero_factors, 2, alpha),
        gauge=1.0 + 0.0j,
        zero_factors=zero_factors,
        phase1=phase1,
        phase2=phase2,
    ).regauge(gauge)
    return factor_residual(pair, function, alpha).pair


def split_zero_factors(f: AnalyticFnSpec) -> Tuple[List[AnalyticFnSpec], AnalyticFnSpec]:
    """
    Separate the factors that vanish near the real axis.

    2·sin(βz) with β < 0 becomes -1 · 2·sin(|β|z).

    Returns:
        (zero factors, zero-free remainder)
    """
    zero_factors = []
    smooth = []
    for leaf in f.leaves():
        if leaf.kind == FunctionKind.IDENTITY:
            zero_factors.append(leaf)
        elif leaf.kind == FunctionKind.SCALED_SINE:
            if leaf.beta == 0.0:
                raise AdmissibilityError("2·sin(0·z) vanishes identically")
            if leaf.beta < 0:
                smooth.append(AnalyticFnSpec.const(-1.0))
            zero_factors.append(leaf.model_copy(update={"beta": abs(leaf.beta)}))
        else:
            smooth.append(leaf)
    remainder = AnalyticFnSpec.product(*smooth) if smooth else AnalyticFnSpec.const(1.0)
    return zero_factors, remainder


def factorize(f: AnalyticFnSpec, alpha: float, grid: GridSpec,
              convention: GaugeConvention = GaugeConvention.PHASE_ZERO_AT_CENTER,
              reference: Optional[np.ndarray] = None,
              fit_tolerance: float = FIT_TOLERANCE) -> FactorPair:
    """
    Full pipeline: admissibility, mode solve, affine fit, gauge.

    Raises:
        InvalidParameterError: If alpha <= 0
        AdmissibilityError: If f vanishes identically or on a boundary line
        FactorizationError: If the affine fit does not converge
    """
    if alpha <= 0:
        raise InvalidParameterError(f"alpha must be positive, got {alpha}")
    if f.identically_zero:
        raise AdmissibilityError(f"{f.label} vanishes identically")
    boundary = boundary_log_data(f, alpha, grid)
    logger.info(f"Factorizing {f.label} at alpha={alpha} on n={grid.n}, h={grid.spacing}; "
                f"boundary winding {boundary.winding_info}")

    zero_factors, remainder = split_zero_factors(f)
    data = boundary_log_data(remainder, alpha, grid)
    modes = solve_fourier_modes(data, alpha)
    pair = fix_affine_and_gauge(modes, data, alpha, convention, reference,
                                function=f, zero_factors=zero_factors, fit_tolerance=fit_tolerance)
    logger.info(f"Factor pair for {f.label}: residual_b2={pair.residual_b2:.2e}, residual_b3={pair.residual_b3:.2e}")
    return pair


def evaluate_factor(pair: FactorPair, which: int, offset_y: float,
                    settings: Optional[DeltaSettings] = None) -> np.ndarray:
    """
    Meromorphic continuation of w_which to the line Im z = offset_y.

    No holomorphy-strip check; continue_into_strip is the checked entry point.
    """
    if which not in (1, 2):
        raise InvalidParameterError(f"factor index must be 1 or 2, got {which}")
    if offset_y == 0.0:
        return (pair.w1_real_line if which == 1 else pair.w2_real_line).copy()
    return _assembled(pair, which, offset_y, settings)


def _assembled(pair: FactorPair, which: int, offset_y: float,
               settings: Optional[DeltaSettings] = None) -> np.ndarray:
    """gauge · exact blocks · e^{i(slope·z + intercept + periodic(z))} on Im z = offset_y"""
    grid = pair.grid
    z = grid.x + 1j * offset_y
    phase = pair.phase1 if which == 1 else pair.phase2
    continued = phase.periodic.astype(complex)
    if offset_y != 0.0:
        periodic = LineSample(grid=grid, offset_y=0.0, values=continued)
        continued = analytic_shift(periodic, offset_y, noise_floor=CONTINUATION_NOISE_FLOOR).values
    blocks = _block_values(pair.zero_factors, which, z, pair.alpha, settings)
    return pair.gauge * blocks * np.exp(1j * (phase.slope * z + phase.intercept + continued))


def _rebuilt(pair: FactorPair, function: AnalyticFnSpec, **updates) -> FactorPair:
    """Pair with new phase models or blocks, resampled on the real line, residuals refreshed"""
    draft = pair.model_copy(update={"function": function, **updates})
    draft = draft.model_copy(update={
        "w1_real_line": _assembled(draft, 1, 0.0),
        "w2_real_line": _assembled(draft, 2, 0.0),
    })
    return factor_residual(draft, function, pair.alpha).pair


def _moved(phase: PhaseModel, **changes) -> PhaseModel:
    return phase.model_copy(update=changes)


def multiply_pairs(first: FactorPair, second: FactorPair) -> FactorPair:
    """
    Pair of the product f·g from the pairs of f and g: components multiply.

    Raises:
        InvalidParameterError: If the pairs use different grids or strips
    """
    if first.grid != second.grid or abs(first.alpha - second.alpha) > 1e-15 * max(1.0, first.alpha):
        raise InvalidParameterError("pairs must share the grid and alpha to be multiplied")
    p1, q1, p2, q2 = first.phase1, second.phase1, first.phase2, second.phase2
    return _rebuilt(
        first,
        AnalyticFnSpec.product(first.function, second.function),
        phase1=PhaseModel(slope=p1.slope + q1.slope, intercept=p1.intercept + q1.intercept,
                          periodic=p1.periodic + q1.periodic),
        phase2=PhaseModel(slope=p2.slope + q2.slope, intercept=p2.intercept + q2.intercept,
                          periodic=p2.periodic + q2.periodic),
        zero_factors=list(first.zero_factors) + list(second.zero_factors),
        gauge=first.gauge * second.gauge,
        slope1=first.slope1 + second.slope1,
        slope2=first.slope2 + second.slope2,
    )


def scale_pair(pair: FactorPair, factor: float) -> FactorPair:
    """
    Pair of λ·f for λ > 0: both components gain e^{iσx}, σ = -log λ/(2α).

    Raises:
        InvalidParameterError: If λ <= 0
    """
    if factor <= 0:
        raise InvalidParameterError(f"scaling factor must be positive, got {factor}")
    sigma = -np.log(factor) / (2.0 * pair.alpha)
    return _rebuilt(
        pair,
        AnalyticFnSpec.product(AnalyticFnSpec.const(factor), pair.function),
        phase1=_moved(pair.phase1, slope=pair.phase1.slope + sigma),
        phase2=_moved(pair.phase2, slope=pair.phase2.slope + sigma),
        slope1=pair.slope1 + sigma,
        slope2=pair.slope2 + sigma,
    )


def rotate_pair(pair: FactorPair, theta: float) -> FactorPair:
    """Pair of e^{iθ}·f: w1 gains e^{iθ/2}, w2 gains e^{-iθ/2}"""
    return _rebuilt(
        pair,
        AnalyticFnSpec.product(AnalyticFnSpec.const(np.exp(1j * theta)), pair.function),
        phase1=_moved(pair.phase1, intercept=pair.phase1.intercept + 0.5 * theta),
        phase2=_moved(pair.phase2, intercept=pair.phase2.intercept - 0.5 * theta),
    )


def _translated_periodic(periodic: np.ndarray, grid: GridSpec, x0: float) -> np.ndarray:
    spectrum = np.fft.fft(periodic) * np.exp(-1j * grid.frequencies * x0)
    return np.fft.ifft(spectrum).real


def translate_pair(pair: FactorPair, x0: float) -> FactorPair:
    """Pair of f(z - x0) for real x0: w_j(z) -> w_j(z - x0)"""
    grid = pair.grid
    p1, p2 = pair.phase1, pair.phase2
    return _rebuilt(
        pair,
        pair.function.translated(x0),
        phase1=_moved(p1, intercept=p1.intercept - p1.slope * x0,
                      periodic=_translated_periodic(p1.periodic, grid, x0)),
        phase2=_moved(p2, intercept=p2.intercept - p2.slope * x0,
                      periodic=_translated_periodic(p2.periodic, grid, x0)),
        zero_factors=[factor.translated(x0) for factor in pair.zero_factors],
    )


def _holomorphy_strip(which: int, alpha: float) -> Tuple[float, float]:
    return (0.0, 2.0 * alpha) if which == 1 else (-2.0 * alpha, 2.0 * alpha)


def continue_into_strip(pair: FactorPair, target_lines: Sequence[float], which: int = 2) -> Dict[float, LineSample]:
    """
    Sample w1 on lines inside [0, 2α] or w2 on lines inside [-2α, 2α].

    Raises:
        StripDomainError: If a line lies outside the holomorphy strip
        IllPosedContinuationError: If the continuation overflows
    """
    lower, upper = _holomorphy_strip(which, pair.alpha)
    lines = {}
    for y in target_lines:
        if not lower - LINE_SLACK <= y <= upper + LINE_SLACK:
            raise StripDomainError(f"line Im z = {y} is outside the strip [{lower}, {upper}] of w{which}")
        lines[float(y)] = LineSample(grid=pair.grid, offset_y=float(y), values=evaluate_factor(pair, which, y))
    return lines


def factor_residual(pair: FactorPair, f: AnalyticFnSpec, alpha: float) -> FactorResidual:
    """
    Max residuals of w1(x) = f(x-αi)·w2(x-2αi) and w2(x) = f̄(x-αi)·w1(x-2αi)
    on the central half-window. The returned pair carries the new values.
    """
    if abs(alpha - pair.alpha) > 1e-15 * max(1.0, alpha):
        raise InvalidParameterError(f"pair was built for alpha={pair.alpha}, got {alpha}")
    grid = pair.grid
    x = grid.x
    window = grid.central_half
    w2_lowered = evaluate_factor(pair, 2, -2.0 * alpha)
    w1_lowered = evaluate_factor(pair, 1, -2.0 * alpha)
    f_lower = f.evaluate(x - 1j * alpha)
    fbar_lower = np.conj(f.evaluate(x + 1j * alpha))

    res_b2 = float(np.max(np.abs(pair.w1_real_line - f_lower * w2_lowered)[window]))
    res_b3 = float(np.max(np.abs(pair.w2_real_line - fbar_lower * w1_lowered)[window]))
    return FactorResidual(res_b2=res_b2, res_b3=res_b3, pair=pair.with_residuals(res_b2, res_b3))


def iterated_relation_residual(pair: FactorPair, which: int = 1) -> float:
    """
    Relative residual of w1(x+4αi) = f(x+3αi)·f̄(x+αi)·w1(x), or of
    w2(x+4αi) = f̄(x+3αi)·f(x+αi)·w2(x), on the central half-window.
    """
    f, alpha, grid = pair.function, pair.alpha, pair.grid
    x = grid.x
    fbar = f.reflected()
    raised = evaluate_factor(pair, which, 4.0 * alpha)
    base = pair.w1_real_line if which == 1 else pair.w2_real_line
    outer, inner = (f, fbar) if which == 1 else (fbar, f)
    expected = outer.evaluate(x + 3j * alpha) * inner.evaluate(x + 1j * alpha) * base
    return central_max(raised - expected, grid) / central_max(expected, grid)


def upper_edge_residual(pair: FactorPair) -> float:
    """Relative residual of w1(x+2αi) = f(x+αi)·w2(x) on the central half-window"""
    grid, alpha = pair.grid, pair.alpha
    raised = evaluate_factor(pair, 1, 2.0 * alpha)
    expected = pair.function.evaluate(grid.x + 1j * alpha) * pair.w2_real_line
    return central_max(raised - expected, grid) / central_max(expected, grid)


def polar_decompose(pair: FactorPair, f: AnalyticFnSpec, alpha: float) -> PolarResult:
    """
    u_f = w1·w̄2 and g_f(z) = w2(z+αi)·w̄2(z-αi), sampled where the
    reconstruction f(x) = u_f(x+αi)·g_f(x) is checked.
    """
    grid = pair.grid
    w1, w2 = pair.w1_real_line, pair.w2_real_line
    w1_up = evaluate_factor(pair, 1, alpha)
    w2_up = evaluate_factor(pair, 2, alpha)
    w2_down = evaluate_factor(pair, 2, -alpha)
    w2_up2 = evaluate_factor(pair, 2, 2.0 * alpha)

    u_real = w1 * np.conj(w2)
    u_upper = w1_up * np.conj(w2_down)
    g_real = w2_up * np.conj(w2_up)
    g_lower = w2 * np.conj(w2_up2)

    target = f.evaluate(grid.x.astype(complex))
    recon = central_max(target - u_upper * g_real, grid) / central_max(target, grid)
    logger.info(f"Polar decomposition of {f.label}: reconstruction residual {recon:.2e}")
    return PolarResult(
        u_real=LineSample(grid=grid, offset_y=0.0, values=u_real),
        u_upper=LineSample(grid=grid, offset_y=alpha, values=u_upper),
        g_real=LineSample(grid=grid, offset_y=0.0, values=g_real),
        g_lower=LineSample(grid=grid, offset_y=-alpha, values=g_lower),
        recon_residual=recon,
    )


def gauge_ratio(pair: FactorPair, other: FactorPair) -> Dict[str, complex]:
    """Pointwise ratios other/pair per component: means and standard deviations"""
    if pair.grid != other.grid:
        raise InvalidParameterError("gauge comparison needs pairs on the same grid")
    ratio1 = other.w1_real_line / pair.w1_real_line
    ratio2 = other.w2_real_line / pair.w2_real_line
    return {
        "c1": complex(np.mean(ratio1)),
        "c2": complex(np.mean(ratio2)),
        "std1": float(np.std(ratio1)),
        "std2": float(np.std(ratio2)),
    }
