"""Exception types shared across the pipeline."""


class FigmineError(Exception):
    """Base class for all figmine errors."""


class DecodeError(FigmineError):
    """Image bytes could not be decoded."""


class UnsupportedFormat(FigmineError):
    """Image format outside the accepted set."""


class InvalidImage(FigmineError):
    """Image fails a size or content precondition."""


class InvalidParameter(FigmineError):
    """Parameter outside its valid range."""


class InsufficientData(FigmineError):
    """Not enough samples for the requested fit."""


class InvalidTrainingSet(FigmineError):
    """Training set violates a classifier precondition."""


class InvalidFeature(FigmineError):
    """Feature vector malformed (NaN or wrong dimension)."""


class InvalidRegion(FigmineError):
    """Rectangle outside image bounds."""


class ParseError(FigmineError):
    """Malformed input line; carries the 1-based line number."""

    def __init__(self, message, line_number=None):
        super().__init__(message)
        self.line_number = line_number


class EmptyGraph(FigmineError):
    """Graph has no nodes."""


class EmptyInput(FigmineError):
    """Operation requires a nonempty input."""


class InsufficientBins(FigmineError):
    """Fewer bins than the statistic requires."""


class InvalidConfusionMatrix(FigmineError):
    """Confusion matrix cannot be column-normalized."""


class UndefinedMetric(FigmineError):
    """Metric denominator is zero."""


class EmptyQuery(FigmineError):
    """Search query has no tokens."""


class NotFound(FigmineError):
    """Requested id does not exist."""
