"""
Unit tests for the Toeplitz quadrature and the Weyl comparison.

Tests cover:
- QuadratureSpec validation and construction from configuration
- Gram matrices of the zeta basis and their orthogonality
- Toeplitz matrices against C(p,q), with and without the Hermitian weight
"""

import dataclasses

import numpy as np
import pytest

from src.algebra.matrices import hermitian_defect
from src.config.settings import QuadratureConfig, ToleranceConfig
from src.toeplitz.quadrature import (
    QuadratureSpec,
    check_drift,
    gram_matrix,
    inner_product,
    scaled_condition,
)
from src.toeplitz.weyl import heat_factor, toeplitz_matrix, toeplitz_operator, weyl_qg_compare
from src.torus.curves import CurveObservable
from src.utils.errors import ConvergenceError, InputError

SPEC = QuadratureSpec()


@pytest.mark.parametrize(
    "overrides",
    [{"grid": 16}, {"refinement": 1}, {"weight_scale": 0.0}, {"eps": -1.0}],
)
def test_spec_validation(overrides):
    """Test that invalid quadrature settings raise InputError."""
    with pytest.raises(InputError):
        QuadratureSpec(**overrides)


def test_spec_from_config():
    """Test building a spec from configuration with overrides."""
    spec = QuadratureSpec.from_config(QuadratureConfig(grid=48), ToleranceConfig(quadrature_drift=1e-6), strict=False)
    assert spec.grid == 48
    assert spec.refined_grid == 96
    assert spec.drift_tolerance == 1e-6
    assert not spec.strict


def test_gram_matrix():
    """Test that the Gram matrix is Hermitian and well conditioned."""
    gram = gram_matrix(4, SPEC)
    assert gram.shape == (3, 3)
    assert hermitian_defect(gram) < 1e-12
    assert np.all(np.diag(gram).real > 0)
    assert scaled_condition(gram) < 1e3


@pytest.mark.parametrize("r", [2, 4, 8])
def test_gram_is_diagonal(r):
    """Test that distinct zeta basis vectors are orthogonal."""
    gram = gram_matrix(r, SPEC)
    diagonal = np.diag(np.diag(gram))
    assert np.max(np.abs(gram - diagonal)) < 1e-12 * np.max(np.abs(diagonal))


def test_trivial_curve_toeplitz_is_twice_identity():
    """Test T(0,0) = 2 I, the constant symbol 2."""
    for r in (3, 4, 6):
        matrix = toeplitz_matrix(CurveObservable(0, 0), r, SPEC)
        assert np.max(np.abs(matrix - 2 * np.eye(r - 1))) < 1e-9


def test_gram_converges_between_grids():
    """Test that the Hermitian weight gives grid-independent inner products."""
    coarse = gram_matrix(3, SPEC)
    fine = gram_matrix(3, SPEC, SPEC.refined_grid)
    assert check_drift(coarse, fine, SPEC, "gram") < 1e-8


def test_inner_product():
    """Test a diagonal inner product and the index guard."""
    value = inner_product(1, 1, 3, SPEC)
    assert value.real > 0
    assert abs(value.imag) < 1e-10
    with pytest.raises(InputError):
        inner_product(0, 1, 3, SPEC)


def test_check_drift_strict():
    """Test that strict specs reject drifting grids."""
    coarse, fine = np.zeros((2, 2)), np.full((2, 2), 1e-3)
    with pytest.raises(ConvergenceError):
        check_drift(coarse, fine, SPEC, "test")
    relaxed = dataclasses.replace(SPEC, strict=False)
    assert check_drift(coarse, fine, relaxed, "test") == pytest.approx(1e-3)


def test_condition_guard():
    """Test that an impossible condition limit raises ConvergenceError."""
    with pytest.raises(ConvergenceError):
        toeplitz_operator(CurveObservable(1, 0), 3, dataclasses.replace(SPEC, condition_limit=0.5))


def test_heat_factor():
    """Test the heat-flow factor of a curve."""
    assert heat_factor(CurveObservable(0, 0), 5) == 1.0
    assert heat_factor(CurveObservable(1, 1), 4) > heat_factor(CurveObservable(1, 0), 4) > 1.0


def test_weyl_matches_quantum_group():
    """Test that the Toeplitz matrix equals C(1,0) up to a scalar at r = 3."""
    comparison = weyl_qg_compare(CurveObservable(1, 0), 3, SPEC)
    assert comparison.best_scalar_diff <= 1e-6
    assert comparison.grid == SPEC.refined_grid
    data = comparison.to_json()
    assert data["bestScalarDiff"] == comparison.best_scalar_diff
    assert set(data) >= {"r", "p", "q", "grid", "maxAbsDiff", "bestScalarDiff", "fittedScalar"}


def test_weyl_negative_control():
    """Test that the wrong weight breaks the match."""
    spec = dataclasses.replace(SPEC, weight_scale=2.0, strict=False)
    comparison = weyl_qg_compare(CurveObservable(1, 0), 3, spec)
    assert comparison.best_scalar_diff > 1e-3
