"""Exception types raised across the package."""


class GaborError(ValueError):
    """Base class for all errors raised by gabor_blocks."""


class InvalidDimensionError(GaborError):
    pass


class InvalidIndexError(GaborError):
    pass


class InvalidSetError(GaborError):
    pass


class InvalidArgumentError(GaborError):
    pass


class ContractViolationError(GaborError):
    pass


class NotInvertibleError(GaborError):
    pass


class NotAFrameError(GaborError):
    """The system (or one diagonal block of its frame operator) is singular.

    ``block`` holds the offending block index when the failure was detected
    during blockwise inversion, otherwise ``None``.
    """

    def __init__(self, message, block=None):
        super().__init__(message)
        self.block = block


class NoBlockStructureError(GaborError):
    pass


class NotBlockCirculantError(GaborError):
    pass


class DimensionalConstraintError(GaborError):
    pass


class SizeLimitError(GaborError):
    pass
