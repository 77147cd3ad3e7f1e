"""
Error types shared across cskit.

Every error derives from the closest built-in exception so callers may catch
either the specific class or the built-in one. The CLI maps these classes to
exit codes:

- InputError, ResourceGuardError -> 2
- IntegralityError, ConvergenceError, VerificationError -> 3
- CalibrationError -> 4
"""

from typing import Dict, List, Optional


class InputError(ValueError):
    """Malformed or out-of-range user input."""


class PDFormatError(InputError):
    """Invalid planar diagram text or structure."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BraidFormatError(InputError):
    """Invalid braid word text."""


class GraphFormatError(InputError):
    """Invalid trivalent graph text or structure."""


class ResourceGuardError(ValueError):
    """A computation would exceed a desk-scale resource guard."""


class IntegralityError(ArithmeticError):
    """A quantity that must be an integer is not within tolerance of one."""


class ConvergenceError(ArithmeticError):
    """A numerical procedure failed its convergence or conditioning guard."""


class VerificationError(RuntimeError):
    """Two independent computation paths disagree."""


class CalibrationError(RuntimeError):
    """Convention calibration is ambiguous, missing or inconsistent."""

    def __init__(self, message: str, deviations: Optional[Dict[str, float]] = None):
        super().__init__(message)
        self.deviations: Dict[str, float] = dict(deviations or {})

    def describe(self) -> List[str]:
        """Return one human-readable line per recorded candidate deviation."""
        return [f"{name}: {value:.12g}" for name, value in sorted(self.deviations.items())]


EXIT_OK = 0
EXIT_INPUT = 2
EXIT_MATH = 3
EXIT_CALIBRATION = 4


def exit_code_for(error: BaseException) -> int:
    """
    Map an exception onto the command-line exit-code contract.

    Args:
        error: The exception raised by a library call.

    Returns:
        int: 2 for input and resource errors, 3 for mathematical failures,
        4 for calibration problems.

    Raises:
        BaseException: ``error`` itself when it belongs to none of the classes.
    """
    if isinstance(error, CalibrationError):
        return EXIT_CALIBRATION
    if isinstance(error, VerificationError):
        return EXIT_MATH
    if isinstance(error, (InputError, ResourceGuardError)):
        return EXIT_INPUT
    if isinstance(error, (IntegralityError, ConvergenceError)):
        return EXIT_MATH
    if isinstance(error, ValueError):
        return EXIT_INPUT
    if isinstance(error, ArithmeticError):
        return EXIT_MATH
    raise error
