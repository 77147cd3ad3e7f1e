"""
Classical theta series and the odd basis zeta_j of the level-r torus states.

theta_j(z) = sum_n exp(-pi (2 r n^2 + 2 j n) + 2 pi i z (j + 2 r n)).

With m = j + 2rn this is exp(pi j^2 / 2r) times the normalised series
Theta_j(z) = sum_{m = j mod 2r} exp(-pi m^2 / 2r + 2 pi i m z), which only
depends on j mod 2r. The basis is zeta_j = r^(1/4) (Theta_j - Theta_-j).
"""

import logging
import math

import numpy as np

from src.utils.errors import ConvergenceError, InputError

logger = logging.getLogger(__name__)

IMAG_WINDOW = 2.0
DEFAULT_EPS = 1e-14


def series_window(j: int, y: float, r: int, eps: float) -> range:
    """
    Range of n whose terms are not below ``eps`` times the largest term.

    Term magnitudes are Gaussian in n with width 1/sqrt(2 pi r) around
    n* = -(j + 2ry) / 2r.
    """
    centre = -(j + 2 * r * y) / (2 * r)
    reach = math.ceil(math.sqrt(math.log(4.0 / eps) / (2 * math.pi * r))) + 1
    return range(math.floor(centre) - reach, math.ceil(centre) + reach + 1)


def _normalised_theta(j: int, z: complex, r: int, eps: float) -> complex:
    if eps <= 0:
        raise InputError(f"eps must be positive, got {eps}")
    if r < 1:
        raise InputError(f"level must be positive, got {r}")
    if abs(z.imag) > IMAG_WINDOW:
        logger.error("theta evaluation at Im z = %g is outside the window", z.imag)
        raise ConvergenceError(
            f"|Im z| = {abs(z.imag):.3g} exceeds the evaluation window {IMAG_WINDOW}"
        )
    window = series_window(j, z.imag, r, eps)
    n = np.arange(window.start, window.stop)
    m = j + 2 * r * n
    exponent = -math.pi * m.astype(np.float64) ** 2 / (2 * r) + 2 * math.pi * 1j * m * z
    return complex(np.sum(np.exp(exponent)))


def theta_eval(j: int, z: complex, r: int, eps: float = DEFAULT_EPS) -> complex:
    """
    theta_j(z) at level r.

    The truncation keeps every term within a factor eps of the largest one,
    so the relative error is below 2*eps.

    Raises:
        ConvergenceError: if |Im z| > 2.
    """
    return math.exp(math.pi * j * j / (2 * r)) * _normalised_theta(j, complex(z), r, eps)


def normalised_theta(j: int, z: complex, r: int, eps: float = DEFAULT_EPS) -> complex:
    """Theta_j(z) = exp(-pi j^2 / 2r) theta_j(z); periodic in j with period 2r."""
    return _normalised_theta(j % (2 * r), complex(z), r, eps)


def zeta_eval(j: int, z: complex, r: int, eps: float = DEFAULT_EPS) -> complex:
    """
    zeta_j(z) = r^(1/4) exp(-pi j^2 / 2r) (theta_j(z) - theta_-j(z)).

    Any integer index is accepted; zeta is odd in j and 2r-periodic, so
    indices 0 and r give the zero function.
    """
    residue = j % (2 * r)
    if residue in (0, r):
        return complex(0.0)
    return r ** 0.25 * (normalised_theta(j, z, r, eps) - normalised_theta(-j, z, r, eps))
