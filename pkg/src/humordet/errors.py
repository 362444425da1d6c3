"""Exception hierarchy shared across the pipeline.

``UsageError`` maps to exit code 1, ``DataError`` subclasses to exit code 2;
anything else escaping the CLI is an internal error (exit code 3).
"""


class HumordetError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(HumordetError):
    """Bad command line or config-file input."""


class DataError(HumordetError):
    """Problem with user-supplied data or on-disk artifacts."""


class MissingFile(DataError):
    pass


class BadCsv(DataError):
    pass


class NotEnoughRows(DataError):
    pass


class EmptyInput(DataError):
    pass


class LengthMismatch(DataError):
    pass


class EmptyTrainingSet(DataError):
    pass


class DimMismatch(DataError):
    pass


class NotInStore(DataError):
    """A backend was asked for a text or id it does not hold."""


class IdNotFound(NotInStore):
    pass


class BadMagic(DataError):
    pass


class VersionMismatch(DataError):
    pass


class TruncatedFile(DataError):
    pass


class ShapeMismatch(DataError):
    pass
