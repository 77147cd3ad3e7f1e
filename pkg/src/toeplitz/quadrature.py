"""
Quadrature of theta-basis sections over the torus fundamental domain.

Sections are sampled on a uniform N x N grid of [0,1]^2 with the square root
of the Hermitian weight e^(-w pi r y^2) folded in, so every inner product is
a plain sum over grid points. For w = 4 the integrand is doubly periodic and
the rectangle rule converges exponentially.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.algebra.matrices import ComplexMatrix, max_abs
from src.config.settings import QuadratureConfig, ToleranceConfig
from src.utils.errors import ConvergenceError, InputError

logger = logging.getLogger(__name__)

MIN_GRID = 32


@dataclass(frozen=True)
class QuadratureSpec:
    """
    Attributes:
        grid: Points per axis on the coarse level.
        eps: Theta truncation tolerance.
        refinement: Grid factor of the consistency level.
        weight_scale: w in the weight e^(-w pi r y^2); 4.0 is the Hermitian metric.
        strict: Raise when the two levels drift apart by more than ``drift_tolerance``.
        drift_tolerance: Allowed change between grid and refined grid.
        condition_limit: Largest accepted condition number of the scaled Gram matrix.
    """

    grid: int = 64
    eps: float = 1e-14
    refinement: int = 2
    weight_scale: float = 4.0
    strict: bool = True
    drift_tolerance: float = 1e-8
    condition_limit: float = 1e8

    def __post_init__(self) -> None:
        if self.grid < MIN_GRID:
            raise InputError(f"quadrature grid must be at least {MIN_GRID}, got {self.grid}")
        if self.refinement < 2:
            raise InputError(f"refinement factor must be at least 2, got {self.refinement}")
        if self.eps <= 0 or self.weight_scale <= 0:
            raise InputError("eps and weight_scale must be positive")

    @classmethod
    def from_config(
        cls,
        quadrature: QuadratureConfig,
        tolerances: Optional[ToleranceConfig] = None,
        **overrides: object,
    ) -> "QuadratureSpec":
        tolerances = tolerances or ToleranceConfig()
        values = dict(
            grid=quadrature.grid,
            eps=quadrature.theta_eps,
            refinement=quadrature.refinement,
            weight_scale=quadrature.weight_scale,
            drift_tolerance=tolerances.quadrature_drift,
            condition_limit=tolerances.gram_condition,
        )
        values.update(overrides)
        return cls(**values)  # type: ignore[arg-type]

    @property
    def refined_grid(self) -> int:
        return self.grid * self.refinement


def grid_axes(grid: int) -> Tuple[np.ndarray, np.ndarray]:
    """Flattened x and y coordinates, x-major."""
    axis = np.arange(grid) / grid
    x, y = np.meshgrid(axis, axis, indexing="ij")
    return x.ravel(), y.ravel()


def zeta_grid(r: int, grid: int, spec: QuadratureSpec) -> np.ndarray:
    """
    Weighted samples of zeta_1..zeta_{r-1}.

    Returns:
        Array of shape (r-1, grid*grid) holding zeta_k(x + iy) e^(-w pi r y^2 / 2).
    """
    if r < 2:
        raise InputError(f"level must be at least 2, got {r}")
    axis = np.arange(grid) / grid
    period = 2 * r
    reach = math.ceil(math.sqrt(period * math.log(4.0 / spec.eps) / math.pi)) + 1
    m = np.arange(-period - reach, reach + 1)
    gauss = np.exp(-(math.pi / period) * (m[:, None] + period * axis[None, :]) ** 2)
    waves = np.exp(2j * math.pi * m[:, None] * axis[None, :])
    residues = m % period

    theta = np.empty((period, grid, grid), dtype=np.complex128)
    for residue in range(period):
        selected = residues == residue
        theta[residue] = waves[selected].T @ gauss[selected]

    extra = np.exp((2.0 - spec.weight_scale / 2.0) * math.pi * r * axis ** 2)
    rows = [
        r ** 0.25 * (theta[k] - theta[(-k) % period]) * extra[None, :]
        for k in range(1, r)
    ]
    return np.stack(rows).reshape(r - 1, grid * grid)


def gram_from_samples(samples: np.ndarray) -> ComplexMatrix:
    """G[l, k] = <zeta_k, zeta_l>."""
    count = samples.shape[1]
    return samples.conj() @ samples.T / count


def gram_matrix(r: int, spec: QuadratureSpec, grid: Optional[int] = None) -> ComplexMatrix:
    return gram_from_samples(zeta_grid(r, grid or spec.grid, spec))


def scaled_condition(gram: ComplexMatrix) -> float:
    """Condition number of D^(-1/2) G D^(-1/2), D = diag(G)."""
    scale = np.sqrt(np.abs(np.diag(gram).real))
    if np.any(scale == 0.0):
        return math.inf
    return float(np.linalg.cond(gram / np.outer(scale, scale)))


def check_drift(coarse: np.ndarray, fine: np.ndarray, spec: QuadratureSpec, what: str) -> float:
    """
    Max-abs change between the two grid levels.

    Raises:
        ConvergenceError: if strict and the change exceeds the drift tolerance.
    """
    drift = max_abs(coarse - fine)
    logger.debug("%s: drift %.3g between grids %d and %d", what, drift, spec.grid, spec.refined_grid)
    if spec.strict and drift > spec.drift_tolerance:
        logger.error("%s did not converge: drift %.3g", what, drift)
        raise ConvergenceError(
            f"{what}: quadrature drift {drift:.3g} exceeds {spec.drift_tolerance:.3g}"
        )
    return drift


def inner_product(j: int, k: int, r: int, spec: QuadratureSpec) -> complex:
    """
    <zeta_j, zeta_k> = integral of zeta_j conj(zeta_k) e^(-w pi r y^2) over [0,1]^2.

    Raises:
        InputError: if an index is outside 1..r-1.
        ConvergenceError: if the two grid levels disagree.
    """
    for index in (j, k):
        if not 1 <= index <= r - 1:
            raise InputError(f"basis index {index} outside 1..{r - 1}")
    coarse = gram_matrix(r, spec)
    fine = gram_matrix(r, spec, spec.refined_grid)
    check_drift(coarse, fine, spec, f"inner product at r={r}")
    return complex(fine[k - 1, j - 1])
