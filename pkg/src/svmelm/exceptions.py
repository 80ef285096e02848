"""Exception hierarchy shared by every module of the package."""


class SvmElmError(Exception):
    """Base class for all errors raised by svmelm."""


class DimensionMismatch(SvmElmError, ValueError):
    pass


class InvalidRange(SvmElmError, ValueError):
    pass


class NotSymmetric(SvmElmError, ValueError):
    pass


class NotPositiveDefinite(SvmElmError, ArithmeticError):
    """Cholesky failed even after diagonal jitter escalation."""


class EmptyDataset(SvmElmError, ValueError):
    pass


class SingleClass(SvmElmError, ValueError):
    """A binary or multiclass fit saw fewer than two classes."""


class MaxIterations(UserWarning):
    """SMO hit its iteration cap before the KKT tolerance was met."""


class DataFormatError(SvmElmError, ValueError):
    pass


class ParseError(DataFormatError):
    def __init__(self, message, row=None, column=None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.row = row
        self.column = column


class RaggedRows(ParseError):
    pass


class UnknownLabel(ParseError):
    pass


class BadMagic(DataFormatError):
    pass


class TruncatedFile(DataFormatError):
    pass


class CountMismatch(DataFormatError):
    pass


class InvalidConfig(SvmElmError, ValueError):
    def __init__(self, message, field=None):
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
        self.field = field


class InsufficientClassSize(SvmElmError, ValueError):
    def __init__(self, message, label=None):
        super().__init__(message)
        self.label = label


class LengthMismatch(SvmElmError, ValueError):
    pass
