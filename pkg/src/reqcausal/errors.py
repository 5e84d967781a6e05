"""Exception types shared across the package."""


class ReqCausalError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(ReqCausalError, ValueError):
    """A caller-supplied value violates an operation's preconditions."""


class ConfigurationError(ReqCausalError, ValueError):
    """A configuration value is unrecognized or internally inconsistent."""


class NumericError(ReqCausalError, ArithmeticError):
    """A computation produced or received a non-finite value."""


class CorruptionError(ReqCausalError):
    """Stored or in-memory data fails an integrity check."""


class AlignmentError(ReqCausalError):
    """Word-level tags cannot be mapped onto a subword sequence."""


class ParseError(ReqCausalError, ValueError):
    """A record in an input file is malformed.

    ``line`` is the 1-based line (or row) number when known.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EvaluationError(ReqCausalError):
    """The classifier failed on a dataset example during evaluation."""

    def __init__(self, message: str, index: int, text: str):
        super().__init__(f"example {index} ({text!r}): {message}")
        self.index = index
        self.text = text


class CheckpointError(ReqCausalError):
    """Base class for checkpoint serialization failures."""


class CheckpointFormatError(CheckpointError):
    """The file does not look like a checkpoint at all."""


class CheckpointVersionError(CheckpointError):
    """The checkpoint was written with an unsupported format version."""


class CheckpointTruncatedError(CheckpointError):
    """The checkpoint ends before all declared tensors were read."""


class CheckpointShapeError(CheckpointError):
    """A stored tensor's shape disagrees with the embedded config."""


class StoreError(ReqCausalError):
    """Base class for feedback-store failures."""


class StoreLockedError(StoreError):
    """Another process already holds the store's write lock."""


class UnknownRecordError(StoreError):
    """No record exists with the requested id."""


class AlreadyReviewedError(StoreError):
    """The record already carries a confirmation or correction."""


class NotACorrectionError(StoreError):
    """A correction must differ from the predicted label."""
