########################
# Exception Hierarchy  #
########################

"""
This module defines the exception hierarchy for the lification workbench,
providing structured error handling across every component.

Key Features:
1. Base Exception:
   - LificationError is the root of every workbench-specific error
   - Lets callers (the CLI in particular) catch everything in one place

2. Validation Errors:
   - ValidationError groups failures caused by bad inputs: malformed text,
     mismatched shapes or grades, unsupported structures, bad placement plans
   - The CLI maps this group to exit code 2

3. Operation Errors:
   - OperationError groups failures that happen while computing: exact
     division by zero, size caps, cancelled computations
   - The CLI maps this group to exit code 1

4. Configuration Errors:
   - ConfigurationError is raised when settings loaded from the environment
     are invalid
"""


class LificationError(Exception):
    """
    Base exception class for workbench-specific errors.

    All custom exceptions inherit from this class, allowing for unified
    error handling.
    """
    pass


class ValidationError(LificationError):
    """
    Raised when an input fails validation.

    Covers malformed files, wrong dimensions and anything else the caller can
    fix by changing what they pass in.
    """
    pass


class OperationError(LificationError):
    """
    Raised when a computation fails on otherwise valid inputs.
    """
    pass


class ConfigurationError(LificationError):
    """
    Raised when workbench configuration is invalid.

    Triggered by non-positive caps, unknown scalar backends, unparsable grids
    and similar problems in the environment or constructor arguments.
    """
    pass


# ----------------------------------------------------------------------
# Scalar and matrix polynomial errors
# ----------------------------------------------------------------------

class DivisionByZero(OperationError):
    """Raised when an exact scalar or polynomial division by zero is attempted."""
    pass


class BackendMismatch(ValidationError):
    """Raised when scalars from different backends are combined without promotion."""
    pass


class ParseError(ValidationError):
    """Raised when scalar or structure text cannot be parsed."""
    pass


class SchemaError(ValidationError):
    """Raised when a JSON document does not follow the expected schema."""
    pass


class ShapeMismatch(ValidationError):
    """Raised when matrix or block dimensions are inconsistent."""
    pass


class DimensionMismatch(ShapeMismatch):
    """Raised when polynomial sizes are incompatible for a product or comparison."""
    pass


class GradeTooSmall(ValidationError):
    """Raised when a declared grade is smaller than the actual degree."""
    pass


class WrongGrade(ValidationError):
    """Raised when a polynomial does not have the grade an operation needs."""
    pass


class GradeNotOddMultiple(ValidationError):
    """Raised when the grade k is not an odd multiple (2d+1)·ℓ of ℓ."""
    pass


class FloatBackendUnsupported(ValidationError):
    """Raised when an exact-only operation receives binary-float data."""
    pass


class MissingProvenance(ValidationError):
    """Raised when an operation needs block provenance that is not present."""
    pass


# ----------------------------------------------------------------------
# Structure and construction errors
# ----------------------------------------------------------------------

class SingularMobiusMatrix(ValidationError):
    """Raised when a Möbius transformation is requested for a singular 2x2 matrix."""
    pass


class NonConinvolutory(ValidationError):
    """Raised when a structure operation needs A·conj(A) = I and it fails."""
    pass


class UnsupportedMatrix(ValidationError):
    """Raised when a Möbius matrix has no associated placement condition."""
    pass


class StructureCheckFailed(ValidationError):
    """Raised when a polynomial fails the structure it was declared to have."""
    pass


class IncompletePlan(ValidationError):
    """Raised when a placement plan misses, misplaces or mis-weights a coefficient."""
    pass


class OverlapConflict(ValidationError):
    """Raised when two placements target the same slot with different coefficients."""
    pass


class NotMinimalBasis(ValidationError):
    """Raised when a polynomial matrix is not a minimal basis where one is required."""
    pass


class NotSingular(ValidationError):
    """Raised when minimal indices are requested for a regular polynomial."""
    pass


class EmptyGrid(ValidationError):
    """Raised when the refuter is given an empty coefficient grid."""
    pass


# ----------------------------------------------------------------------
# Resource errors
# ----------------------------------------------------------------------

class SizeCapExceeded(OperationError):
    """Raised when a matrix exceeds the configured size cap for exact work."""
    pass


class TooManyMinors(OperationError):
    """Raised when minimal-basis certification would enumerate too many minors."""
    pass


class ComputationCancelled(OperationError):
    """Raised when a progress callback asks a long computation to stop."""
    pass
