#!/usr/bin/env python3
"""
Tests for the boundary-unitary factorization and the polar decomposition.
"""

import sys
import os

# Add src to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

import numpy as np
import pytest

from models.domain import AnalyticFnSpec, GaugeConvention, GridSpec, OracleParams
from strip.closed_form import oracle_line
from strip.errors import AdmissibilityError, InvalidParameterError, StripDomainError
from strip.factorizer import (
    boundary_log_data,
    continue_into_strip,
    factor_residual,
    factorize,
    gauge_ratio,
    iterated_relation_residual,
    multiply_pairs,
    polar_decompose,
    rotate_pair,
    scale_pair,
    solve_fourier_modes,
    split_zero_factors,
    translate_pair,
    upper_edge_residual,
)
from strip.strip_core import central_max

GRID = GridSpec.centered(2048, 0.04)
STEP = GRID.frequency_step


def _unimodular(pair) -> float:
    return max(central_max(np.abs(pair.w1_real_line) - 1.0, GRID),
               central_max(np.abs(pair.w2_real_line) - 1.0, GRID))


def test_exact_sine_case():
    f = AnalyticFnSpec.scaled_sine(4 * STEP)
    pair = factorize(f, 0.1, GRID)
    assert pair.residual_b2 < 1e-8
    assert pair.residual_b3 < 1e-8
    assert _unimodular(pair) < 1e-12
    assert pair.slope1 == pytest.approx(2 * STEP)
    assert pair.slope2 == pytest.approx(-2 * STEP)
    assert pair.w1_real_line[GRID.center_index] == pytest.approx(1.0)


def test_negative_sine_frequency_splits_sign():
    zero_factors, remainder = split_zero_factors(AnalyticFnSpec.scaled_sine(-4 * STEP))
    assert zero_factors[0].beta == pytest.approx(4 * STEP)
    assert remainder.evaluate(0.3) == pytest.approx(-1.0)
    pair = factorize(AnalyticFnSpec.scaled_sine(-4 * STEP), 0.1, GRID)
    assert pair.residual_b2 < 1e-8 and pair.residual_b3 < 1e-8


def test_identity_block_combines_with_spectral_part():
    alpha = 0.5
    identity = AnalyticFnSpec.identity()
    offset = AnalyticFnSpec.cosine_offset(8 * STEP, 3.0)
    pair = factorize(AnalyticFnSpec.product(identity, offset), alpha, GRID)
    assert pair.residual_b2 < 1e-8 and pair.residual_b3 < 1e-8
    assert _unimodular(pair) < 1e-8

    combined = multiply_pairs(factorize(identity, alpha, GRID), factorize(offset, alpha, GRID))
    assert combined.residual_b2 < 1e-8 and combined.residual_b3 < 1e-8
    ratio = gauge_ratio(pair, combined)
    assert ratio["std1"] < 1e-6 and ratio["std2"] < 1e-6
    assert abs(abs(ratio["c1"]) - 1.0) < 1e-8


def test_exponential_slopes():
    kappa = 6 * STEP
    pair = factorize(AnalyticFnSpec.exponential(kappa), 0.2, GRID)
    assert pair.slope1 == pytest.approx(kappa / 2, abs=1e-8)
    assert pair.slope2 == pytest.approx(-kappa / 2, abs=1e-8)
    assert pair.residual_b2 < 1e-8 and pair.residual_b3 < 1e-8


def test_zero_free_spectral_case():
    f = AnalyticFnSpec.cosine_offset(8 * STEP, 3.0)
    data = boundary_log_data(f, 0.1, GRID)
    modes = solve_fourier_modes(data, 0.1)
    assert modes.derivative_domain and not modes.tapered
    pair = factorize(f, 0.1, GRID)
    assert pair.residual_b2 < 1e-8 and pair.residual_b3 < 1e-8
    assert _unimodular(pair) < 1e-12


def test_product_of_blocks_and_spectral_part():
    f = AnalyticFnSpec.product(
        AnalyticFnSpec.scaled_sine(4 * STEP),
        AnalyticFnSpec.exponential(-2 * STEP),
        AnalyticFnSpec.const(2.0 - 1.0j),
    )
    pair = factorize(f, 0.1, GRID)
    assert pair.residual_b2 < 1e-8 and pair.residual_b3 < 1e-8


def test_conjugate_symmetry():
    f = AnalyticFnSpec.product(AnalyticFnSpec.exponential(3 * STEP), AnalyticFnSpec.cosine_offset(6 * STEP, 3.0))
    pair = factorize(f, 0.1, GRID)
    mirrored = factorize(f.reflected(), 0.1, GRID)
    ratio = mirrored.w1_real_line / pair.w2_real_line
    assert np.std(ratio[GRID.central_half]) < 1e-8


def test_gauge_uniqueness():
    alpha = 0.5
    f = AnalyticFnSpec.identity()
    reference = oracle_line(1, GRID, 0.0, OracleParams(alpha=alpha)).values
    centered = factorize(f, alpha, GRID)
    matched = factorize(f, alpha, GRID, GaugeConvention.MATCH_REFERENCE, reference)
    ratio = gauge_ratio(centered, matched)
    assert ratio["std1"] < 1e-6 and ratio["std2"] < 1e-6
    assert abs(ratio["c1"] - ratio["c2"]) < 1e-6
    assert abs(abs(ratio["c1"]) - 1.0) < 1e-8


def test_reference_gauge_needs_reference():
    with pytest.raises(InvalidParameterError):
        factorize(AnalyticFnSpec.identity(), 0.5, GRID, GaugeConvention.MATCH_REFERENCE)


def test_regauge_keeps_relations():
    pair = factorize(AnalyticFnSpec.scaled_sine(4 * STEP), 0.1, GRID)
    turned = pair.regauge(np.exp(0.4j))
    check = factor_residual(turned, turned.function, 0.1)
    assert check.res_b2 < 1e-8 and check.res_b3 < 1e-8
    assert turned.gauge == pytest.approx(pair.gauge * np.exp(0.4j))


def test_iterated_relations():
    pair = factorize(AnalyticFnSpec.product(AnalyticFnSpec.scaled_sine(4 * STEP), AnalyticFnSpec.exponential(STEP)),
                     0.1, GRID)
    assert iterated_relation_residual(pair, 1) < 1e-8
    assert iterated_relation_residual(pair, 2) < 1e-8


def test_continued_lines_satisfy_boundary_relations():
    alpha = 0.1
    f = AnalyticFnSpec.product(AnalyticFnSpec.scaled_sine(4 * STEP), AnalyticFnSpec.cosine_offset(8 * STEP, 3.0))
    pair = factorize(f, alpha, GRID)
    x = GRID.x

    w1_top = continue_into_strip(pair, [2 * alpha], which=1)[2 * alpha].values
    expected = f.evaluate(x + 1j * alpha) * pair.w2_real_line
    assert central_max(w1_top - expected, GRID) / central_max(expected, GRID) < 1e-8
    assert upper_edge_residual(pair) < 1e-8

    lines = continue_into_strip(pair, [-2 * alpha, 0.0], which=2)
    assert np.array_equal(lines[0.0].values, pair.w2_real_line)
    rebuilt = f.evaluate(x - 1j * alpha) * lines[-2 * alpha].values
    assert central_max(rebuilt - pair.w1_real_line, GRID) < 1e-8

    with pytest.raises(StripDomainError):
        continue_into_strip(pair, [-alpha], which=1)
    with pytest.raises(StripDomainError):
        continue_into_strip(pair, [3 * alpha], which=2)


def test_positive_scaling_tilts_both_components():
    alpha, factor = 0.1, 2.5
    f = AnalyticFnSpec.scaled_sine(4 * STEP)
    pair = factorize(f, alpha, GRID)
    scaled = scale_pair(pair, factor)
    sigma = -np.log(factor) / (2 * alpha)
    assert scaled.residual_b2 < 1e-8 and scaled.residual_b3 < 1e-8
    assert _unimodular(scaled) < 1e-10
    assert scaled.slope1 == pytest.approx(pair.slope1 + sigma)
    assert scaled.slope2 == pytest.approx(pair.slope2 + sigma)
    assert scaled.function.evaluate(0.3) == pytest.approx(factor * f.evaluate(0.3))
    tilt = scaled.w1_real_line / pair.w1_real_line
    assert np.allclose(tilt, np.exp(1j * sigma * GRID.x))
    with pytest.raises(InvalidParameterError):
        scale_pair(pair, 0.0)


def test_unimodular_constant_splits_between_components():
    theta = 0.8
    pair = factorize(AnalyticFnSpec.cosine_offset(8 * STEP, 3.0), 0.1, GRID)
    rotated = rotate_pair(pair, theta)
    assert rotated.residual_b2 < 1e-8 and rotated.residual_b3 < 1e-8
    assert np.allclose(rotated.w1_real_line / pair.w1_real_line, np.exp(0.5j * theta))
    assert np.allclose(rotated.w2_real_line / pair.w2_real_line, np.exp(-0.5j * theta))


def test_translation_moves_both_components():
    alpha, x0 = 0.1, 0.37
    offset = AnalyticFnSpec.cosine_offset(8 * STEP, 3.0)
    moved = translate_pair(factorize(offset, alpha, GRID), x0)
    assert moved.residual_b2 < 1e-8 and moved.residual_b3 < 1e-8
    direct = factorize(offset.translated(x0), alpha, GRID)
    ratio = gauge_ratio(direct, moved)
    assert ratio["std1"] < 1e-6 and ratio["std2"] < 1e-6

    sine = factorize(AnalyticFnSpec.scaled_sine(4 * STEP), alpha, GRID)
    shifted = translate_pair(sine, x0)
    assert shifted.residual_b2 < 1e-8 and shifted.residual_b3 < 1e-8
    assert _unimodular(shifted) < 1e-10


def test_products_need_a_shared_grid():
    first = factorize(AnalyticFnSpec.scaled_sine(4 * STEP), 0.1, GRID)
    with pytest.raises(InvalidParameterError):
        multiply_pairs(first, factorize(AnalyticFnSpec.exponential(STEP), 0.2, GRID))


def test_degenerate_inputs():
    with pytest.raises(AdmissibilityError):
        factorize(AnalyticFnSpec.scaled_sine(0.0), 0.1, GRID)
    with pytest.raises(AdmissibilityError):
        factorize(AnalyticFnSpec.const(0.0), 0.1, GRID)
    with pytest.raises(InvalidParameterError):
        factorize(AnalyticFnSpec.identity(), -1.0, GRID)


def test_boundary_zero_is_inadmissible():
    beta, alpha = np.pi / 2.0, 0.1
    f = AnalyticFnSpec.cosine_offset(beta, np.cosh(beta * alpha))
    with pytest.raises(AdmissibilityError) as info:
        boundary_log_data(f, alpha, GRID)
    assert info.value.kind == "admissibility"


def test_polar_exact_case():
    f = AnalyticFnSpec.scaled_sine(4 * STEP)
    pair = factorize(f, 0.1, GRID)
    polar = polar_decompose(pair, f, 0.1)
    g = polar.g_real.values[GRID.central_half]
    assert np.min(g.real) > -1e-8
    assert np.max(np.abs(g.imag)) < 1e-8
    assert central_max(np.abs(polar.u_real.values) - 1.0, GRID) < 1e-8
    assert polar.recon_residual < 1e-6
    assert polar.u_upper.offset_y == 0.1 and polar.g_lower.offset_y == -0.1


def test_polar_identity_case():
    f = AnalyticFnSpec.identity()
    pair = factorize(f, 0.5, GRID)
    polar = polar_decompose(pair, f, 0.5)
    g = polar.g_real.values[GRID.central_half]
    assert np.min(g.real) > -1e-8
    assert np.max(np.abs(g.imag)) < 1e-8
    assert polar.recon_residual < 1e-3


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
