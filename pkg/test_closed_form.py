#!/usr/bin/env python3
"""
Tests for the closed-form factor pairs of z and 2·sin(βz).
"""

import sys
import os

# Add src to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

import numpy as np
import pytest

from models.domain import GridSpec, OracleParams
from strip.closed_form import (
    catalog_distance,
    oracle_line,
    oracle_ratio_residual,
    oracle_w,
    seeded_interior_points,
    zero_pole_catalog,
)
from strip.errors import DomainExclusionError, InvalidParameterError, PoleEvaluationError
from strip.sine_blocks import q_pochhammer, sine_block

PARAMS = OracleParams(alpha=0.5)
WIDE = GridSpec(n=2048, spacing=40.0 / 2048, origin=-20.0)


def test_oracle_constants():
    assert PARAMS.beta_c == 0.5j
    assert PARAMS.gamma_c == pytest.approx(-np.log(2.0))


def test_oracle_unimodular_on_real_line():
    for which in (1, 2):
        line = oracle_line(which, WIDE, 0.0, PARAMS)
        assert np.max(np.abs(np.abs(line.values) - 1.0)) < 1e-9


def test_ratio_identities_at_seeded_points():
    points = seeded_interior_points(PARAMS, 50, seed=7)
    assert len(points) == 50
    for z in points:
        r1, r2 = oracle_ratio_residual(z, PARAMS)
        assert r1 < 1e-8 and r2 < 1e-8


def test_catalog_layout():
    catalog = zero_pole_catalog(PARAMS, 2)
    assert catalog.w1_zeros == [0.5j, 2.5j, 4.5j]
    assert catalog.w2_zeros == [1.5j, 3.5j, 5.5j]
    assert catalog.w1_poles == [-0.5j, -2.5j, -4.5j]
    assert len(catalog.singularities()) == 12
    assert catalog_distance(1.5j, PARAMS) == 0.0
    assert catalog_distance(0.0 + 0.0j, PARAMS) == pytest.approx(0.5)


def test_zeros_vanish():
    catalog = zero_pole_catalog(PARAMS, 2)
    for z in catalog.w1_zeros:
        assert abs(oracle_w(1, z, PARAMS)) < 1e-8
    for z in catalog.w2_zeros:
        assert abs(oracle_w(2, z, PARAMS)) < 1e-8


def test_poles_blow_up():
    catalog = zero_pole_catalog(PARAMS, 2)
    for z in catalog.w1_poles:
        assert abs(oracle_w(1, z + 1e-9, PARAMS)) > 1e6
    for z in catalog.w2_poles:
        assert abs(oracle_w(2, z + 1e-9, PARAMS)) > 1e6


def test_pole_evaluation_names_pole():
    with pytest.raises(PoleEvaluationError) as info:
        oracle_w(1, -0.5j, PARAMS)
    assert info.value.nearest_pole == pytest.approx(-0.5j)
    assert info.value.kind == "pole-evaluation"


def test_residual_excludes_catalog_neighbourhood():
    with pytest.raises(DomainExclusionError):
        oracle_ratio_residual(0.5j, PARAMS)
    with pytest.raises(DomainExclusionError):
        oracle_ratio_residual(1.5j + 1e-8, PARAMS)


def test_oracle_scalar_and_array_shapes():
    assert isinstance(oracle_w(1, 0.3 + 0.1j, PARAMS), complex)
    values = oracle_w(2, np.array([[0.1, 0.2], [0.3, 0.4]]), PARAMS)
    assert values.shape == (2, 2)
    with pytest.raises(InvalidParameterError):
        oracle_w(3, 0.0, PARAMS)


def test_q_pochhammer():
    assert q_pochhammer(0.0, 0.5) == 1.0
    direct = np.prod([1.0 - 0.3 * 0.5**k for k in range(80)])
    assert abs(q_pochhammer(0.3, 0.5) - direct) < 1e-15
    with pytest.raises(InvalidParameterError):
        q_pochhammer(0.3, 1.0)


def test_sine_blocks_unimodular_and_intertwining():
    alpha, beta = 0.1, 1.3
    x = np.linspace(-10.0, 10.0, 801)
    w1 = sine_block(1, x, beta, alpha)
    w2 = sine_block(2, x, beta, alpha)
    assert np.max(np.abs(np.abs(w1) - 1.0)) < 1e-12
    assert np.max(np.abs(np.abs(w2) - 1.0)) < 1e-12

    f_lower = 2.0 * np.sin(beta * (x - 1j * alpha))
    assert np.max(np.abs(w1 - f_lower * sine_block(2, x - 2j * alpha, beta, alpha))) < 1e-10
    assert np.max(np.abs(w2 - f_lower * sine_block(1, x - 2j * alpha, beta, alpha))) < 1e-10


def test_sine_block_zeros_and_poles():
    alpha, beta = 0.1, 1.3
    for m in (-1, 0, 2):
        assert abs(sine_block(1, m * np.pi / beta + 1j * alpha, beta, alpha)) < 1e-12
        assert abs(sine_block(2, m * np.pi / beta + 3j * alpha, beta, alpha)) < 1e-12
    with pytest.raises(PoleEvaluationError) as info:
        sine_block(2, np.pi / beta - 3j * alpha, beta, alpha)
    assert info.value.nearest_pole == pytest.approx(np.pi / beta - 3j * alpha)


def test_sine_block_rejects_bad_parameters():
    with pytest.raises(InvalidParameterError):
        sine_block(1, 0.0, -1.0, 0.1)
    with pytest.raises(InvalidParameterError):
        sine_block(3, 0.0, 1.0, 0.1)


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
