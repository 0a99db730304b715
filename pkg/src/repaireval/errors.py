"""Exception types shared across the toolkit.

Every error raised on purpose derives from RepairEvalError so callers (and
the CLI) can separate validation failures from genuine bugs.
"""


class RepairEvalError(Exception):
    """Base class for all toolkit errors."""


class UnknownLanguageTag(RepairEvalError):
    """Language tag is not one of the supported values."""


class EmptySource(RepairEvalError):
    """An operation needed a non-empty source sequence and got none."""


class DomainError(RepairEvalError):
    """An argument fell outside an operation's valid domain."""


class GoldenIsIdentical(RepairEvalError):
    """A golden fix has zero edit cost against its buggy input."""


class InconsistentN(RepairEvalError):
    """Task records disagree on the number of candidates per task."""


class EmptyGroup(RepairEvalError):
    """A rollout group contains no samples."""


class NoCorrectSamples(RepairEvalError):
    """A penalty computation found no correct samples to normalize over."""


class ExactTooLarge(RepairEvalError):
    """Exact subset selection would exceed the enumeration budget."""


class ParseError(RepairEvalError):
    """An input line is not valid JSON; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class SchemaError(RepairEvalError):
    """A record is missing required fields or holds values of the wrong shape."""
