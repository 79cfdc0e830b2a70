class TomographyError(ValueError):
    """Base class for every error raised by the tomography library."""


class InvalidStateError(TomographyError):
    """A matrix does not satisfy the invariants of the type it is wrapped in."""


class InvalidParameterError(TomographyError):
    pass


class ShapeMismatchError(TomographyError):
    pass


class UnphysicalProcessError(TomographyError):
    """A Choi state is not completely positive or not trace preserving."""


class RankDeficientError(TomographyError):
    """The SPAM set is not informationally complete for linear inversion."""


class StorageError(TomographyError):
    """Reading or writing a result file failed. The message carries the path."""
