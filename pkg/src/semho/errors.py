"""Exception types shared across the toolkit.

The CLI maps these onto distinct exit codes (see ``semho.cli``); library
callers can catch ``SemhoError`` to intercept everything the toolkit raises
deliberately.
"""

from __future__ import annotations


class SemhoError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(SemhoError):
    """Invalid generation/training configuration (bad ranges, weights, ...)."""


class GenerationExhaustedError(SemhoError):
    """The draw budget ran out before a decision class met its quota."""

    def __init__(self, starved_class: str, draws: int):
        self.starved_class = starved_class
        self.draws = draws
        super().__init__(
            f"class {starved_class!r} quota not met after {draws} draws"
        )


class ParseError(SemhoError):
    """Scenario text does not match the canonical grammar."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class ConsistencyError(SemhoError):
    """Fields that must agree across lines do not (e.g. target BS id)."""


class RangeError(SemhoError):
    """A field value lies outside its legal range."""


class VectorLengthError(SemhoError):
    """A label vector does not have exactly one flag per label."""


class UnknownLabelError(SemhoError, LookupError):
    """A label name is not part of the canonical schema."""


class ShapeError(SemhoError):
    """Metric inputs have mismatched shapes."""


class EmptyInputError(SemhoError):
    """A metric was asked to reduce over zero rows."""


class DivergenceError(SemhoError):
    """Training produced a non-finite loss."""

    def __init__(self, epoch: int):
        self.epoch = epoch
        super().__init__(f"non-finite training loss at epoch {epoch}")


class ModelFormatError(SemhoError):
    """A serialized model file is not a valid model frame."""


class DatasetFormatError(SemhoError):
    """A dataset file line is not valid JSON or misses required fields."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class IntegrityError(SemhoError):
    """A dataset record violates an invariant (labels/text/tags disagree)."""


class StratificationError(SemhoError):
    """A decision class has too few samples to split."""


class WireError(SemhoError):
    """Base class for wire-format failures."""


class EncodingError(WireError):
    """A field cannot be represented in the wire format."""


class WireLengthError(WireError):
    """A frame is not exactly the expected number of bytes."""


class WireVersionError(WireError):
    """A frame carries an unsupported version byte."""


class ReservedBitError(WireError):
    """A frame has nonzero reserved bits or an unused code point."""


class ChecksumError(WireError):
    """A frame's checksum does not match its payload."""


class LogitsError(SemhoError):
    """Base class for logits-interchange failures."""


class LogitsFormatError(LogitsError):
    """A logits file line is malformed or carries non-finite values."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class LogitCountError(LogitsError):
    """A logits record does not carry one value per label."""


class UnknownIdError(LogitsError):
    """A logits record references an id absent from the dataset."""


class DuplicateIdError(LogitsError):
    """Two logits records reference the same id."""


class MissingIdError(LogitsError):
    """A dataset id has no matching logits record."""
