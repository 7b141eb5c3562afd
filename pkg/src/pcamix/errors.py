"""Exception hierarchy.

Validation problems with the input data derive from ``ValidationError``;
bad numeric parameters (``k``, ``tol``, ...) derive from ``ParameterError``.
The CLI maps the two families to different exit codes.
"""


class PcamixError(Exception):
    pass


class ValidationError(PcamixError, ValueError):
    """Input data violates a table invariant.

    ``column`` names the offending column when there is one.
    """

    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


class ZeroVarianceError(ValidationError):
    pass


class TooFewRowsError(ValidationError):
    pass


class SingleCategoryError(ValidationError):
    pass


class MissingValueError(ValidationError):
    pass


class DegenerateInputError(ValidationError):
    pass


class ParameterError(PcamixError, ValueError):
    pass


class KTooLargeError(ParameterError):
    pass


class KTooSmallError(ParameterError):
    pass


class IndexSetMismatchError(ParameterError):
    pass
