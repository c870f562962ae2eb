"""
Finite-dimensional operator lab.
Position-basis matrices for e^{±2αP}, L_f, R_f, A_f and the q-deformed
Heisenberg representation, with residual checks of their identities.
"""

import logging
from typing import Dict, Optional, Sequence

import numpy as np
from scipy.linalg import circulant, polar, svdvals

from models.domain import (
    AnalyticFnSpec,
    FactorPair,
    FunctionKind,
    GridSpec,
    OperatorSuite,
    OpMatrix,
    QHeisParams,
    QHeisSuite,
    TestVectorSpec,
)
from models.reports import SvdPolarReport
from .errors import GridMismatchError, InvalidParameterError, OperatorOverflowError, RankDeficiencyError
from .strip_core import CONTINUATION_GUARD

logger = logging.getLogger(__name__)

RANK_FLOOR = 1e-14
DEFAULT_VECTOR_COUNT = 4
DEFAULT_CORE = (
    TestVectorSpec(gamma=2.0, beta_c=0.0),
    TestVectorSpec(gamma=2.0, beta_c=1.0),
    TestVectorSpec(gamma=2.0, beta_c=0.5j),
    TestVectorSpec(gamma=3.0, beta_c=-0.5 + 2.0j),
)


def _guard(alpha: float, grid: GridSpec) -> None:
    xi = grid.frequencies
    worst = int(np.argmax(np.abs(xi)))
    if 2.0 * alpha * abs(xi[worst]) > CONTINUATION_GUARD:
        raise OperatorOverflowError(f"e^(2αP) overflows at frequency {xi[worst]:.6g}", frequency=float(xi[worst]))


def fourier_multiplier(multiplier: np.ndarray, grid: GridSpec, label: str) -> OpMatrix:
    """Position-basis matrix of the diagonal Fourier multiplier m(ξ)"""
    return OpMatrix(entries=circulant(np.fft.ifft(multiplier)), grid=grid, label=label)


def _block(top_left, top_right, bottom_left, bottom_right, grid: GridSpec, label: str) -> OpMatrix:
    return OpMatrix(entries=np.block([[top_left, top_right], [bottom_left, bottom_right]]), grid=grid, label=label)


def build_operator_suite(f: AnalyticFnSpec, alpha: float, grid: GridSpec) -> OperatorSuite:
    """
    Build e^{±2αP}, L_f = f(x-αi)·e^{2αP}, R_f = e^{2αP}·f̄(x+αi), the block
    antidiagonal A_f = [0, L_f; R_f, 0] and B = [0, e^{2αP}; e^{2αP}, 0].

    Raises:
        OperatorOverflowError: If e^{2α·ξ_max} is not representable
    """
    if alpha <= 0:
        raise InvalidParameterError(f"alpha must be positive, got {alpha}")
    _guard(alpha, grid)
    xi = grid.frequencies
    x = grid.x
    zeros = np.zeros((grid.n, grid.n), dtype=complex)

    plus = fourier_multiplier(np.exp(2.0 * alpha * xi), grid, "e^(2αP)")
    minus = fourier_multiplier(np.exp(-2.0 * alpha * xi), grid, "e^(-2αP)")
    lower_symbol = f.evaluate(x - 1j * alpha)
    # f̄(x+αi) = conj f(x-αi)
    lf = OpMatrix(entries=lower_symbol[:, None] * plus.entries, grid=grid, label=f"{f.label}(x-αi)e^(2αP)")
    rf = OpMatrix(entries=plus.entries * np.conj(lower_symbol)[None, :], grid=grid,
                  label=f"e^(2αP){f.reflected().label}(x+αi)")
    af = _block(zeros, lf.entries, rf.entries, zeros, grid, f"A[{f.label}]")
    b = _block(zeros, plus.entries, plus.entries, zeros, grid, "B")
    logger.info(f"Operator suite for {f.label}: n={grid.n}, cond(e^(2αP)) = {np.exp(4.0 * alpha * np.abs(xi).max()):.3g}")
    return OperatorSuite(function=f, alpha=alpha, grid=grid, expP_plus=plus, expP_minus=minus,
                         Lf=lf, Rf=rf, Af=af, B=b)


def frobenius_residual(actual: np.ndarray, expected: np.ndarray) -> float:
    return float(np.linalg.norm(actual - expected) / max(np.linalg.norm(expected), 1e-300))


def adjoint_residual(suite: OperatorSuite) -> float:
    """‖L_f† - R_f‖_F / ‖L_f‖_F"""
    return frobenius_residual(suite.Lf.entries.conj().T, suite.Rf.entries)


def hermiticity_residual(op: OpMatrix) -> float:
    """‖A - A†‖_F / ‖A‖_F"""
    return frobenius_residual(op.entries, op.entries.conj().T)


def test_vector(spec: TestVectorSpec, grid: GridSpec) -> np.ndarray:
    """Unit-norm samples of e^{-γx² + βx}"""
    x = grid.x
    values = np.exp(-spec.gamma * x * x + spec.beta_c * x)
    return values / np.linalg.norm(values)


# keep pytest from collecting the helper above
test_vector.__test__ = False


def band_limit(vectors: np.ndarray, grid: GridSpec, band_fraction: float) -> np.ndarray:
    """Zero the Fourier modes of each column outside the central band"""
    if not 0.0 < band_fraction <= 1.0:
        raise InvalidParameterError(f"band_fraction must lie in (0, 1], got {band_fraction}")
    spectrum = np.fft.fft(vectors, axis=0)
    spectrum[~grid.central_band_mask(band_fraction)] = 0.0
    return np.fft.ifft(spectrum, axis=0)


def banded_vectors(grid: GridSpec, band_fraction: float, blocks: int = 1, count: int = DEFAULT_VECTOR_COUNT,
                  seed: int = 0) -> np.ndarray:
    """Seeded random complex vectors whose blocks are supported on the central band"""
    rng = np.random.default_rng(seed)
    parts = []
    for _ in range(blocks):
        raw = rng.standard_normal((grid.n, count)) + 1j * rng.standard_normal((grid.n, count))
        parts.append(band_limit(raw, grid, band_fraction))
    return np.vstack(parts)


def core_vectors(grid: GridSpec, specs: Sequence[TestVectorSpec] = DEFAULT_CORE, blocks: int = 1) -> np.ndarray:
    """Dense-core vectors stacked as columns, repeated per block"""
    columns = np.column_stack([test_vector(spec, grid) for spec in specs])
    return np.vstack([columns] * blocks)


def apply_residual(lhs: np.ndarray, rhs: np.ndarray, columns: np.ndarray) -> float:
    """max over test columns of ‖(lhs - rhs)φ‖ / ‖rhs·φ‖"""
    expected = rhs @ columns
    scale = np.maximum(np.linalg.norm(expected, axis=0), 1e-300)
    return float(np.max(np.linalg.norm(lhs @ columns - expected, axis=0) / scale))


def scaling_covariance_residual(suite: OperatorSuite, t: float, band_fraction: float, seed: int = 0) -> float:
    """
    Relative residual of U(-t)·A_f·U(t) = e^{2αt}·A_f on banded test vectors, with
    U(t) multiplication by e^{itx} on each block.
    """
    grid = suite.grid
    if t == 0.0:
        return 0.0
    if not grid.is_commensurate(t):
        logger.warning(f"t = {t} is not on the frequency grid (step {grid.frequency_step:.6g}); "
                       f"the residual includes off-grid leakage")
    phases = np.exp(1j * t * np.concatenate([grid.x, grid.x]))
    lhs = np.conj(phases)[:, None] * suite.Af.entries * phases[None, :]
    rhs = np.exp(2.0 * suite.alpha * t) * suite.Af.entries
    columns = banded_vectors(grid, band_fraction, blocks=2, seed=seed)
    return apply_residual(lhs, rhs, columns)


def intertwining_residual(h: AnalyticFnSpec, alpha: float, grid: GridSpec, columns: np.ndarray) -> float:
    """
    Relative residual of e^{2αP}·h(x)·φ = h(x-2αi)·e^{2αP}·φ on the given
    test columns.
    """
    _guard(alpha, grid)
    plus = fourier_multiplier(np.exp(2.0 * alpha * grid.frequencies), grid, "e^(2αP)").entries
    lhs = plus * h.evaluate(grid.x.astype(complex))[None, :]
    rhs = h.evaluate(grid.x - 2j * alpha)[:, None] * plus
    return apply_residual(lhs, rhs, columns)


def kernel_proxy(suite: OperatorSuite) -> float:
    """Smallest singular value of L_f, the finite shadow of a trivial kernel"""
    return float(svdvals(suite.Lf.entries).min())


def _check_pair(suite_grid: GridSpec, alpha: float, pair: FactorPair) -> None:
    if pair.grid != suite_grid:
        raise GridMismatchError("factor pair and operator suite use different grids")
    if abs(pair.alpha - alpha) > 1e-15 * max(1.0, alpha):
        raise GridMismatchError(f"factor pair built for alpha={pair.alpha}, suite uses {alpha}")


def _core_columns(grid: GridSpec, band_fraction: float, family: Sequence[TestVectorSpec],
                  blocks: int = 1) -> np.ndarray:
    columns = band_limit(core_vectors(grid, family), grid, band_fraction)
    # later blocks carry the core family in reverse order
    return np.vstack([columns if k % 2 == 0 else columns[:, ::-1] for k in range(blocks)])


def _modulated_action(left: np.ndarray, plus: np.ndarray, right: np.ndarray, columns: np.ndarray,
                      grid: GridSpec, band_fraction: float) -> np.ndarray:
    """left·e^{2αP}·right on test columns, right·φ cut to twice the test band first"""
    inner = band_limit(right[:, None] * columns, grid, min(1.0, 2.0 * band_fraction))
    return left[:, None] * (plus @ inner)


def _relative(actual: np.ndarray, expected: np.ndarray) -> float:
    scale = np.maximum(np.linalg.norm(expected, axis=0), 1e-300)
    return float(np.max(np.linalg.norm(actual - expected, axis=0) / scale))


def svd_polar_compare(suite: OperatorSuite, pair: FactorPair, band_fraction: float = 0.5,
                      family: Sequence[TestVectorSpec] = DEFAULT_CORE) -> SvdPolarReport:
    """
    Compare the dense polar factors of L_f with the factor-pair predictions
    L_f = (w1·w̄2)·|L_f|, |L_f| = w2·e^{2αP}·w̄2 and |L_f†| = w1·e^{2αP}·w̄1.

    All three are measured on band-limited dense-core vectors; the unitary
    after one global phase alignment. The predicted moduli apply e^{2αP} to
    w̄·φ cut to twice the test band, so aliased tails of w̄·φ are not
    amplified. A grid that resolves w2 (spacing well below α) is needed
    for a small residual on functions with zeros near the strip.

    Raises:
        GridMismatchError: If pair and suite use different grids or alpha
        RankDeficiencyError: If f(x-αi) vanishes on the grid
    """
    grid = suite.grid
    _check_pair(grid, suite.alpha, pair)
    symbol = np.abs(suite.function.evaluate(grid.x - 1j * suite.alpha))
    if symbol.min() <= RANK_FLOOR * symbol.max():
        raise RankDeficiencyError(f"f(x-αi) vanishes on the grid (min |f| = {symbol.min():.2e})")

    unitary, modulus = polar(suite.Lf.entries, side="right")
    _, left_modulus = polar(suite.Lf.entries, side="left")
    w1, w2 = pair.w1_real_line, pair.w2_real_line
    plus = suite.expP_plus.entries
    columns = _core_columns(grid, band_fraction, family)

    dense_unitary = unitary @ columns
    predicted_unitary = (w1 * np.conj(w2))[:, None] * columns
    overlap = np.vdot(predicted_unitary, dense_unitary)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0

    report = SvdPolarReport(
        unitary_residual=_relative(dense_unitary, phase * predicted_unitary),
        modulus_residual=_relative(_modulated_action(w2, plus, np.conj(w2), columns, grid, band_fraction),
                                   modulus @ columns),
        adjoint_modulus_residual=_relative(_modulated_action(w1, plus, np.conj(w1), columns, grid, band_fraction),
                                           left_modulus @ columns),
    )
    logger.info(f"SVD polar comparison for {suite.function.label}: {report}")
    return report


def diagonalization_residual(suite: OperatorSuite, pair: FactorPair, band_fraction: float,
                             family: Sequence[TestVectorSpec] = DEFAULT_CORE) -> float:
    """
    Relative residual of W†·A_f·W = B with W = diag(w1, w2), on band-limited
    dense-core vectors in both blocks.

    Raises:
        GridMismatchError: If pair and suite use different grids or alpha
    """
    grid = suite.grid
    _check_pair(grid, suite.alpha, pair)
    w = np.concatenate([pair.w1_real_line, pair.w2_real_line])
    columns = _core_columns(grid, band_fraction, family, blocks=2)
    transformed = np.conj(w)[:, None] * (suite.Af.entries @ (w[:, None] * columns))
    return _relative(transformed, suite.B.entries @ columns)


def reflection(grid: GridSpec) -> np.ndarray:
    """Permutation k -> (n-k) mod n, the grid version of η(x) -> η(-x)"""
    n = grid.n
    matrix = np.zeros((n, n), dtype=complex)
    matrix[np.arange(n), (n - np.arange(n)) % n] = 1.0
    return matrix


def qheis_suite(params: QHeisParams, grid: GridSpec) -> QHeisSuite:
    """
    ρ(u) = diag(e^{iβx}, e^{iβx}), ρ(p) = [0, e^{-2αP}; e^{-2αP}, 0] and
    ρ(x) = [0, 2sin β(x-αi)·e^{2αP}; e^{2αP}·2sin β(x+αi), 0].
    """
    _guard(params.alpha, grid)
    zeros = np.zeros((grid.n, grid.n), dtype=complex)
    u = np.diag(np.exp(1j * params.beta_h * grid.x))
    suite = build_operator_suite(AnalyticFnSpec.scaled_sine(params.beta_h), params.alpha, grid)
    minus = suite.expP_minus.entries
    return QHeisSuite(
        params=params,
        grid=grid,
        rho_u=_block(u, zeros, zeros, u, grid, "ρ(u)"),
        rho_p=_block(zeros, minus, minus, zeros, grid, "ρ(p)"),
        rho_x=OpMatrix(entries=suite.Af.entries, grid=grid, label="ρ(x)"),
    )


def qheis_relations(suite: QHeisSuite) -> Dict[str, tuple]:
    """(lhs, rhs) matrix pairs of the six defining relations"""
    q, half = suite.params.q, suite.params.q_half
    u = suite.rho_u.entries
    u_inv = u.conj().T
    p = suite.rho_p.entries
    x = suite.rho_x.entries
    return {
        "u p u^-1 = q p": (u @ p @ u_inv, q * p),
        "u x u^-1 = q^-1 x": (u @ x @ u_inv, x / q),
        "p x = i q^1/2 u^-1 - i q^-1/2 u": (p @ x, 1j * half * u_inv - 1j / half * u),
        "x p = i q^-1/2 u^-1 - i q^1/2 u": (x @ p, 1j / half * u_inv - 1j * half * u),
        "p x - q x p = i q^1/2 (q - q^-1) u": (p @ x - q * (x @ p), 1j * half * (q - 1.0 / q) * u),
        "x p - q p x = -i q^1/2 (q - q^-1) u^-1": (x @ p - q * (p @ x), -1j * half * (q - 1.0 / q) * u_inv),
    }


def qheis_residuals(suite: QHeisSuite, params: QHeisParams, band_fraction: float,
                    seed: int = 0) -> Dict[str, float]:
    """Relative residual of every defining relation on banded test vectors"""
    if params != suite.params:
        raise InvalidParameterError("parameters differ from the ones the suite was built with")
    if not suite.grid.is_commensurate(params.beta_h):
        logger.warning(f"beta_h = {params.beta_h} is not commensurate with the window; relations are approximate")
    columns = banded_vectors(suite.grid, band_fraction, blocks=2, seed=seed)
    return {name: apply_residual(lhs, rhs, columns) for name, (lhs, rhs) in qheis_relations(suite).items()}


def qheis_equivalence_residual(suite: QHeisSuite, pair: Optional[FactorPair], params: QHeisParams,
                               band_fraction: float,
                               family: Sequence[TestVectorSpec] = DEFAULT_CORE) -> float:
    """
    Residual of (WV)†·ρ(x)·(WV) = ρ(p), W = diag(w1, w2) from the factor pair
    of 2·sin(β_h z) and V the grid reflection, on band-limited dense-core
    vectors. pair=None uses W = I.

    Raises:
        GridMismatchError: If pair lives on another grid or belongs to
            another function
    """
    grid = suite.grid
    n = grid.n
    if pair is None:
        w = np.ones(2 * n, dtype=complex)
    else:
        _check_pair(grid, params.alpha, pair)
        function = pair.function
        if function.kind != FunctionKind.SCALED_SINE or \
                abs(function.beta - params.beta_h) > 1e-9 * max(1.0, abs(params.beta_h)) or function.shift != 0.0:
            raise GridMismatchError(f"factor pair of {function.label} does not belong to 2sin({params.beta_h:g}z)")
        w = np.concatenate([pair.w1_real_line, pair.w2_real_line])

    reflect = reflection(grid)
    zeros = np.zeros((n, n), dtype=complex)
    wv = w[:, None] * np.block([[reflect, zeros], [zeros, reflect]])
    transformed = wv.conj().T @ suite.rho_x.entries @ wv
    return apply_residual(transformed, suite.rho_p.entries, _core_columns(grid, band_fraction, family, blocks=2))
