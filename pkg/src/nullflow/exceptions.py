"""Custom exceptions and result types for nullflow.

This module defines a hierarchy of exceptions for the failure modes of the
symbolic, geometric and numerical stages, enabling callers (and the CLI) to
handle each one appropriately. Every class carries an ``exit_code`` used by
the command-line interface to report the error class to the shell.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np


class NullflowError(Exception):
    """Base exception for all nullflow errors.

    All nullflow-specific exceptions inherit from this class,
    allowing callers to catch all nullflow errors with a single handler.

    Attributes:
        message: Human-readable error description.
        exit_code: Process exit code used by the CLI for this error class.

    Examples:
        >>> from nullflow.exceptions import NullflowError
        >>> err = NullflowError("Something went wrong")
        >>> err.message
        'Something went wrong'
        >>> str(err)
        'Something went wrong'

    """

    exit_code: int = 1

    def __init__(self, message: str) -> None:
        """Initialize the exception.

        Args:
            message: Human-readable error description.

        """
        self.message = message
        super().__init__(message)


# Algebra


class AlgebraError(NullflowError):
    """Base exception for differential-polynomial algebra errors."""

    exit_code = 3


class NotExactError(AlgebraError):
    """Raised when a density is not a total derivative.

    Attributes:
        density: Text rendering of the offending density.

    """

    def __init__(self, density: str, reason: str = "Euler operator does not vanish") -> None:
        """Initialize the exception.

        Args:
            density: Text rendering of the offending density.
            reason: Why no primitive exists.

        """
        self.density = density
        self.reason = reason
        super().__init__(f"Not a total derivative ({reason}): {density}")


class NotGradientError(AlgebraError):
    """Raised when a polynomial is not a variational gradient.

    Attributes:
        gradient: Text rendering of the polynomial that was expected to be a gradient.

    """

    def __init__(self, gradient: str) -> None:
        """Initialize the exception.

        Args:
            gradient: Text rendering of the rejected polynomial.

        """
        self.gradient = gradient
        super().__init__(f"Not a variational gradient: {gradient}")


class JetTooShortError(AlgebraError):
    """Raised when a jet does not supply every order a polynomial needs.

    Attributes:
        required: Highest jet order appearing in the polynomial.
        supplied: Number of jet entries supplied.

    """

    def __init__(self, required: int, supplied: int) -> None:
        """Initialize the exception.

        Args:
            required: Highest jet order appearing in the polynomial.
            supplied: Number of jet entries supplied.

        """
        self.required = required
        self.supplied = supplied
        super().__init__(f"Jet too short: order {required} required, {supplied} entries supplied")


class NotAdmissibleError(AlgebraError):
    """Raised when p3 does not define a local vector field (E(u1*p3) != 0).

    Attributes:
        p3: Text rendering of the rejected generator.

    """

    def __init__(self, p3: str) -> None:
        """Initialize the exception.

        Args:
            p3: Text rendering of the rejected generator.

        """
        self.p3 = p3
        super().__init__(f"Not admissible: u1*({p3}) is not a total derivative")


class PolynomialParseError(AlgebraError):
    """Raised when a polynomial text cannot be parsed.

    Attributes:
        text: The text that failed to parse.
        position: Character offset where parsing stopped.

    """

    def __init__(self, text: str, position: int, reason: str) -> None:
        """Initialize the exception.

        Args:
            text: The text that failed to parse.
            position: Character offset where parsing stopped.
            reason: What was expected.

        """
        self.text = text
        self.position = position
        self.reason = reason
        super().__init__(f"Cannot parse polynomial at offset {position} ({reason}): {text!r}")


# Geometry


class GeometryError(NullflowError):
    """Base exception for null-curve geometry errors."""

    exit_code = 4


class FrameDriftError(GeometryError):
    """Raised when a frame leaves the group E(2,1) beyond tolerance.

    Attributes:
        residual: Largest metric residual max |<a_i, a_j> - g_ij|.
        tolerance: Allowed residual.
        index: Sample index where the residual was detected.

    """

    def __init__(self, residual: float, tolerance: float, index: int) -> None:
        """Initialize the exception.

        Args:
            residual: Largest metric residual.
            tolerance: Allowed residual.
            index: Sample index where the residual was detected.

        """
        self.residual = residual
        self.tolerance = tolerance
        self.index = index
        super().__init__(f"Frame drift {residual:.3e} exceeds {tolerance:.1e} at sample {index}; reduce the step size")


class NotPseudoArcError(GeometryError):
    """Raised when a curve is not sampled in the pseudo-arc parameter.

    Attributes:
        deviation: Largest deviation of <gamma'', gamma''> from 1.

    """

    def __init__(self, deviation: float, tolerance: float) -> None:
        """Initialize the exception.

        Args:
            deviation: Largest deviation of <gamma'', gamma''> from 1.
            tolerance: Allowed deviation.

        """
        self.deviation = deviation
        self.tolerance = tolerance
        super().__init__(f"Curve is not in pseudo-arc parameter: |<g'',g''> - 1| = {deviation:.3e} > {tolerance:.1e}")


class FlexPointError(GeometryError):
    """Raised when gamma' and gamma'' become parallel.

    Attributes:
        index: Sample index of the flex point.

    """

    def __init__(self, index: int) -> None:
        """Initialize the exception.

        Args:
            index: Sample index of the flex point.

        """
        self.index = index
        super().__init__(f"Flex point (gamma' ^ gamma'' = 0) at sample {index}")


class NotNullError(GeometryError):
    """Raised when a curve's velocity is not a future-directed null vector.

    Attributes:
        index: First offending sample index.
        value: Normalised <gamma', gamma'> at that sample.

    """

    def __init__(self, index: int, value: float) -> None:
        """Initialize the exception.

        Args:
            index: First offending sample index.
            value: Normalised <gamma', gamma'> at that sample.

        """
        self.index = index
        self.value = value
        super().__init__(f"Velocity is not future-directed null at sample {index} (<g',g'>/|g'|^2 = {value:.3e})")


# Evolution


class EvolutionError(NullflowError):
    """Base exception for time-evolution errors."""

    exit_code = 5


class InstabilityError(EvolutionError):
    """Raised when an evolution blows up.

    Attributes:
        t: Time at which the blow-up was detected.
        peak: Max |kappa| at that time.
        limit: Threshold that was exceeded.

    """

    def __init__(self, t: float, peak: float, limit: float) -> None:
        """Initialize the exception.

        Args:
            t: Time at which the blow-up was detected.
            peak: Max |kappa| at that time.
            limit: Threshold that was exceeded.

        """
        self.t = t
        self.peak = peak
        self.limit = limit
        super().__init__(f"Instability at t={t:.6g}: max|kappa| = {peak:.3e} exceeds {limit:.3e}")


# Special functions


class SpecialFunctionError(NullflowError):
    """Base exception for closed-form and reduced solution errors."""

    exit_code = 6


class InvalidParametersError(SpecialFunctionError):
    """Raised when Weierstrass invariants do not give the periodic branch."""

    def __init__(self, g2: float, g3: float, reason: str) -> None:
        """Initialize the exception.

        Args:
            g2: First invariant.
            g3: Second invariant.
            reason: Which condition failed.

        """
        self.g2 = g2
        self.g3 = g3
        super().__init__(f"Invalid invariants g2={g2}, g3={g3}: {reason}")


class NearPoleError(SpecialFunctionError):
    """Raised when the Weierstrass function is evaluated too close to a lattice point."""

    def __init__(self, x: float, distance: float) -> None:
        """Initialize the exception.

        Args:
            x: Requested argument.
            distance: Distance to the nearest real pole.

        """
        self.x = x
        self.distance = distance
        super().__init__(f"Argument {x:.6g} lies within {distance:.1e} of a pole")


@dataclass(frozen=True)
class PartialSolution:
    """Valid part of an ODE solution computed before a failure.

    Attributes:
        x: Abscissae where the solution is valid.
        values: Solution components, one row per abscissa.

    """

    x: np.ndarray
    values: np.ndarray


class PoleEncounteredError(SpecialFunctionError):
    """Raised when step-size collapse signals a movable pole.

    Attributes:
        x_pole: Abscissa where the integration stopped.
        partial: The valid sub-window of the solution.

    """

    def __init__(self, x_pole: float, partial: PartialSolution) -> None:
        """Initialize the exception.

        Args:
            x_pole: Abscissa where the integration stopped.
            partial: The valid sub-window of the solution.

        """
        self.x_pole = x_pole
        self.partial = partial
        super().__init__(f"Movable pole encountered near x = {x_pole:.6g}")


class DomainError(SpecialFunctionError):
    """Raised when a similarity time lies outside at + b > 0."""

    def __init__(self, a: float, b: float, t: float) -> None:
        """Initialize the exception.

        Args:
            a: Similarity rate.
            b: Similarity offset.
            t: Requested time.

        """
        self.a = a
        self.b = b
        self.t = t
        super().__init__(f"Similarity scaling undefined: a*t + b = {a * t + b:.6g} <= 0")


# Input / output


class InputError(NullflowError):
    """Base exception for input and output errors."""

    exit_code = 2


class InputNotFoundError(InputError):
    """Raised when an input file does not exist.

    Attributes:
        path: Path to the missing file.

    """

    def __init__(self, path: Path) -> None:
        """Initialize the exception.

        Args:
            path: Path to the missing file.

        """
        self.path = path
        super().__init__(f"Input file not found: {path}")


class InputInvalidError(InputError):
    """Raised when an input file exists but cannot be used.

    Attributes:
        path: Path to the invalid input.
        reason: Explanation of why the input is invalid.

    """

    def __init__(self, path: Path, reason: str) -> None:
        """Initialize the exception.

        Args:
            path: Path to the invalid input.
            reason: Explanation of why the input is invalid.

        """
        self.path = path
        self.reason = reason
        super().__init__(f"Invalid input ({reason}): {path}")


class OutputWriteError(InputError):
    """Raised when an artifact cannot be written.

    Attributes:
        path: Destination path.
        original_error: The underlying OS error.

    """

    def __init__(self, path: Path, original_error: Exception) -> None:
        """Initialize the exception.

        Args:
            path: Destination path.
            original_error: The underlying OS error.

        """
        self.path = path
        self.original_error = original_error
        super().__init__(f"Failed to write {path}: {original_error}")


def error_payload(error: NullflowError, partial: Path | None = None) -> dict[str, Any]:
    """Return the machine-readable error document emitted by the CLI.

    Args:
        error: The error being reported.
        partial: Path of a partial artifact written before the failure, if any.

    Returns:
        Dictionary with keys ``error``, ``detail`` and ``partial``.

    Examples:
        >>> from nullflow.exceptions import DomainError, error_payload
        >>> error_payload(DomainError(1.0, -2.0, 1.0))["error"]
        'DomainError'

    """
    return {
        "error": type(error).__name__,
        "detail": error.message,
        "partial": str(partial) if partial is not None else None,
    }
