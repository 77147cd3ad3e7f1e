"""
Toeplitz operators with heat-smoothed symbols, compared against C(p,q).

The symbol of the curve (p, q) is f = e^(pi hbar (p^2 + q^2) / 2) 2cos 2pi(px + qy),
the heat flow e^(-Delta hbar / 4) acting on the cosine as a scalar. Matrices
are T = G^-1 F with F[l, j] = <f zeta_j, zeta_l>.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from src.algebra.matrices import ComplexMatrix, best_scalar_fit, max_abs
from src.toeplitz.quadrature import (
    QuadratureSpec,
    check_drift,
    gram_from_samples,
    grid_axes,
    scaled_condition,
    zeta_grid,
)
from src.torus.curves import CurveObservable, Level
from src.torus.operators import cs_operator
from src.utils.errors import ConvergenceError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ToeplitzResult:
    matrix: ComplexMatrix
    grid: int
    gram_condition: float
    drift: float


@dataclass(frozen=True)
class WeylComparison:
    """Outcome of one Weyl-versus-quantum-group comparison."""

    r: int
    p: int
    q: int
    grid: int
    max_abs_diff: float
    best_scalar_diff: float
    fitted_scalar: complex
    gram_condition: float
    drift: float

    def to_json(self) -> Dict[str, Any]:
        return {
            "r": self.r,
            "p": self.p,
            "q": self.q,
            "grid": self.grid,
            "maxAbsDiff": self.max_abs_diff,
            "bestScalarDiff": self.best_scalar_diff,
            "fittedScalar": self.fitted_scalar,
            "gramCondition": self.gram_condition,
        }


def heat_factor(curve: CurveObservable, r: int) -> float:
    """e^(pi hbar (p^2 + q^2) / 2) with hbar = 1/(2r)."""
    hbar = float(Level(r).hbar)
    return math.exp(math.pi * hbar * (curve.p ** 2 + curve.q ** 2) / 2.0)


def symbol_grid(curve: CurveObservable, r: int, grid: int) -> np.ndarray:
    x, y = grid_axes(grid)
    return heat_factor(curve, r) * 2.0 * np.cos(2.0 * math.pi * (curve.p * x + curve.q * y))


def _toeplitz_at(curve: CurveObservable, r: int, grid: int, spec: QuadratureSpec) -> ToeplitzResult:
    samples = zeta_grid(r, grid, spec)
    gram = gram_from_samples(samples)
    condition = scaled_condition(gram)
    if condition > spec.condition_limit:
        logger.error("Gram matrix at r=%d, grid %d is ill-conditioned (%.3g)", r, grid, condition)
        raise ConvergenceError(
            f"scaled Gram condition {condition:.3g} exceeds {spec.condition_limit:.3g}"
        )
    weighted = symbol_grid(curve, r, grid)[None, :] * samples
    moments = samples.conj() @ weighted.T / samples.shape[1]
    return ToeplitzResult(np.linalg.solve(gram, moments), grid, condition, 0.0)


def toeplitz_operator(curve: CurveObservable, r: int, spec: QuadratureSpec) -> ToeplitzResult:
    """
    Toeplitz matrix on the refined grid, with the coarse grid as consistency check.

    Raises:
        ConvergenceError: on an ill-conditioned Gram matrix, or (strict specs)
            when the two grids drift apart.
    """
    coarse = _toeplitz_at(curve, r, spec.grid, spec)
    fine = _toeplitz_at(curve, r, spec.refined_grid, spec)
    drift = check_drift(coarse.matrix, fine.matrix, spec, f"Toeplitz {curve} at r={r}")
    return ToeplitzResult(fine.matrix, fine.grid, fine.gram_condition, drift)


def toeplitz_matrix(curve: CurveObservable, r: int, spec: QuadratureSpec) -> ComplexMatrix:
    return toeplitz_operator(curve, r, spec).matrix


def weyl_qg_compare(curve: CurveObservable, r: int, spec: QuadratureSpec) -> WeylComparison:
    """
    Compare the Toeplitz matrix T with C(p,q).

    maxAbsDiff is ||T - C||_max; bestScalarDiff is ||lam T - C||_max for the
    least-squares scalar lam, which is reported as fittedScalar.
    """
    result = toeplitz_operator(curve, r, spec)
    target = cs_operator(curve, r)
    scalar, scalar_diff = best_scalar_fit(result.matrix, target)
    comparison = WeylComparison(
        r=r,
        p=curve.p,
        q=curve.q,
        grid=result.grid,
        max_abs_diff=max_abs(result.matrix - target),
        best_scalar_diff=scalar_diff,
        fitted_scalar=scalar,
        gram_condition=result.gram_condition,
        drift=result.drift,
    )
    logger.debug(
        "Weyl %s at r=%d: maxAbsDiff %.3g, bestScalarDiff %.3g",
        curve, r, comparison.max_abs_diff, comparison.best_scalar_diff,
    )
    return comparison
