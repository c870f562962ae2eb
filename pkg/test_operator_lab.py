#!/usr/bin/env python3
"""
Tests for the discretized operators and the q-deformed Heisenberg representation.
"""

import sys
import os

# Add src to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

import numpy as np
import pytest

from models.domain import AnalyticFnSpec, GridSpec, QHeisParams
from strip.errors import GridMismatchError, InvalidParameterError, OperatorOverflowError
from strip.factorizer import factorize
from strip.operator_lab import (
    adjoint_residual,
    band_limit,
    build_operator_suite,
    core_vectors,
    diagonalization_residual,
    frobenius_residual,
    hermiticity_residual,
    intertwining_residual,
    kernel_proxy,
    qheis_equivalence_residual,
    qheis_residuals,
    qheis_suite,
    scaling_covariance_residual,
    svd_polar_compare,
)

ALPHA = 0.1
GRID = GridSpec.centered(256, 0.5)
STEP = GRID.frequency_step
FINE = GridSpec.centered(256, 1.0 / 32.0)


def test_boundary_operators_are_adjoint():
    suite = build_operator_suite(AnalyticFnSpec.identity(), ALPHA, GRID)
    assert adjoint_residual(suite) < 1e-10
    assert hermiticity_residual(suite.Af) < 1e-10
    assert hermiticity_residual(suite.B) < 1e-10
    product = suite.expP_plus.entries @ suite.expP_minus.entries
    assert frobenius_residual(product, np.eye(GRID.n)) < 1e-10


def test_scaling_covariance():
    for f in (AnalyticFnSpec.identity(), AnalyticFnSpec.scaled_sine(4 * STEP)):
        suite = build_operator_suite(f, ALPHA, GRID)
        assert scaling_covariance_residual(suite, 4 * STEP, 0.5) < 1e-8
        assert scaling_covariance_residual(suite, 0.0, 0.5) == 0.0


def test_multiplier_intertwines_trigonometric_symbols():
    vectors = band_limit(core_vectors(GRID), GRID, 0.5)
    for h in (AnalyticFnSpec.scaled_sine(3 * STEP), AnalyticFnSpec.exponential(-2 * STEP),
              AnalyticFnSpec.cosine_offset(5 * STEP, 2.0)):
        assert intertwining_residual(h, ALPHA, GRID, vectors) < 1e-8


def test_polar_factors_match_dense_decomposition():
    for f in (AnalyticFnSpec.exponential(4 * STEP), AnalyticFnSpec.const(1.0)):
        suite = build_operator_suite(f, ALPHA, GRID)
        pair = factorize(f, ALPHA, GRID)
        report = svd_polar_compare(suite, pair)
        assert report.unitary_residual < 1e-8
        assert report.modulus_residual < 1e-8
        assert report.adjoint_modulus_residual < 1e-8
        assert diagonalization_residual(suite, pair, 0.5) < 1e-8


def test_polar_factors_of_sine_on_resolving_grid():
    f = AnalyticFnSpec.scaled_sine(4 * FINE.frequency_step)
    suite = build_operator_suite(f, ALPHA, FINE)
    pair = factorize(f, ALPHA, FINE)
    report = svd_polar_compare(suite, pair, 0.125)
    assert report.unitary_residual < 1e-3
    assert report.modulus_residual < 1e-3
    assert report.adjoint_modulus_residual < 1e-3


def test_factor_pair_diagonalizes_block_operator():
    f = AnalyticFnSpec.scaled_sine(4 * FINE.frequency_step)
    suite = build_operator_suite(f, ALPHA, FINE)
    assert diagonalization_residual(suite, factorize(f, ALPHA, FINE), 0.125) < 1e-3
    other = factorize(AnalyticFnSpec.scaled_sine(2 * FINE.frequency_step), ALPHA, FINE)
    assert diagonalization_residual(suite, other, 0.125) > 1e-1


def test_polar_compare_rejects_other_grid():
    suite = build_operator_suite(AnalyticFnSpec.const(1.0), ALPHA, GRID)
    pair = factorize(AnalyticFnSpec.const(1.0), ALPHA, FINE)
    with pytest.raises(GridMismatchError):
        svd_polar_compare(suite, pair)


def test_kernel_proxy_is_positive():
    suite = build_operator_suite(AnalyticFnSpec.scaled_sine(4 * STEP), ALPHA, GRID)
    assert kernel_proxy(suite) > 0.0


def test_overflow_guard():
    with pytest.raises(OperatorOverflowError) as info:
        build_operator_suite(AnalyticFnSpec.identity(), 10.0, GridSpec.centered(256, 0.01))
    assert info.value.kind == "operator-overflow"


def test_band_limit_validates_fraction():
    vectors = np.ones((GRID.n, 2), dtype=complex)
    for bad in (0.0, 1.5):
        with pytest.raises(InvalidParameterError):
            band_limit(vectors, GRID, bad)
    assert np.allclose(band_limit(vectors, GRID, 1.0), vectors)

    noise = np.random.default_rng(3).standard_normal((GRID.n, 2)) + 0j
    assert np.allclose(band_limit(noise, GRID, 1.0), noise)
    kept = np.abs(np.fft.fft(band_limit(noise, GRID, 0.5), axis=0)) > 1e-12
    assert np.all(np.abs(GRID.frequencies[kept.any(axis=1)]) <= 0.5 * np.abs(GRID.frequencies).max())


def test_qheis_relations_hold():
    params = QHeisParams.on_grid(ALPHA, 4, GRID)
    suite = qheis_suite(params, GRID)
    residuals = qheis_residuals(suite, params, 0.5)
    assert len(residuals) == 6
    for relation, value in residuals.items():
        assert value < 1e-6, relation


def test_qheis_rejects_foreign_parameters():
    params = QHeisParams.on_grid(ALPHA, 4, GRID)
    suite = qheis_suite(params, GRID)
    with pytest.raises(InvalidParameterError):
        qheis_residuals(suite, QHeisParams.on_grid(ALPHA, 5, GRID), 0.5)


def test_unitary_equivalence_of_generators():
    params = QHeisParams.on_grid(ALPHA, 4, GRID)
    suite = qheis_suite(params, FINE)
    pair = factorize(AnalyticFnSpec.scaled_sine(params.beta_h), ALPHA, FINE)
    assert qheis_equivalence_residual(suite, pair, params, 0.5) < 1e-3
    assert qheis_equivalence_residual(suite, None, params, 0.5) > 1e-1


def test_equivalence_rejects_mismatched_pair():
    params = QHeisParams.on_grid(ALPHA, 4, GRID)
    suite = qheis_suite(params, FINE)
    with pytest.raises(GridMismatchError):
        qheis_equivalence_residual(suite, factorize(AnalyticFnSpec.scaled_sine(params.beta_h), ALPHA, GRID),
                                   params, 0.5)
    with pytest.raises(GridMismatchError):
        qheis_equivalence_residual(suite, factorize(AnalyticFnSpec.scaled_sine(params.beta_h), 0.2, FINE),
                                   params, 0.5)
    with pytest.raises(GridMismatchError):
        qheis_equivalence_residual(suite, factorize(AnalyticFnSpec.identity(), ALPHA, FINE), params, 0.5)
    with pytest.raises(GridMismatchError):
        qheis_equivalence_residual(suite, factorize(AnalyticFnSpec.scaled_sine(2 * params.beta_h), ALPHA, FINE),
                                   params, 0.5)


if __name__ == "__main__":
    tests = [(name, fn) for name, fn in sorted(globals().items()) if name.startswith("test_") and callable(fn)]
    failed = 0
    for name, fn in tests:
        try:
            fn()
            print(f"✅ {name}")
        except Exception as e:
            failed += 1
            print(f"❌ {name}: {e}")
    print(f"\n{len(tests) - failed}/{len(tests)} passed")
    exit(1 if failed else 0)
