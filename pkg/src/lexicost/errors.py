"""Exception hierarchy shared across the package."""


class LexicostError(Exception):
    """Base class for all package errors."""


class ParseError(LexicostError):
    """Malformed input text; carries 1-based line/column of the offence."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class ArityMismatchError(LexicostError):
    """A predicate is used with two different arities."""


class NoPositiveExamplesError(LexicostError):
    """The examples file contains no pos(...) line."""


class UnknownBiasDirectiveError(LexicostError):
    """The bias file contains a directive this dialect does not define."""


class InvalidBiasValueError(LexicostError):
    """A bias directive carries an out-of-range value."""


class UnknownPredicateError(LexicostError):
    """An example atom uses a predicate that is not a declared head predicate."""


class ResourceLimitError(LexicostError):
    """Evaluation derived more atoms than the configured cap allows."""


class LengthMismatchError(LexicostError):
    """Two sequences that must be index-aligned have different lengths."""


class EmptyConfusionError(LexicostError):
    """All four confusion counts are zero; no metric is defined."""


class EmptyInputError(LexicostError):
    """An aggregate was requested over an empty collection."""


class DegenerateInputError(LexicostError):
    """A statistic is undefined for this input (e.g. zero variance)."""


class TooFewPairsError(LexicostError):
    """Fewer than the minimum number of informative pairs survive filtering."""


class IncompleteMatrixError(LexicostError):
    """A ranking matrix has missing or ragged entries."""


class TooLargeError(LexicostError):
    """The instance exceeds the size bound of an exhaustive procedure."""


class SchemaError(LexicostError):
    """A results file does not match the expected CSV schema."""
