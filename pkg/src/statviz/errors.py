"""Exception hierarchy shared across the pipeline."""


class StatvizError(Exception):
    """Base class for all errors raised by this package."""


class EmptyInput(StatvizError):
    """The statement is empty or whitespace-only."""


class ConfigMismatch(StatvizError):
    """Declared feature width does not match the produced width."""


class DimensionMismatch(StatvizError):
    """Feature matrix width does not match the model configuration."""


class CorpusEmpty(StatvizError):
    """Training was requested on an empty corpus."""


class NonFiniteLoss(StatvizError):
    """Training loss became NaN/inf (learning rate too large)."""


class UnparsableNumber(StatvizError):
    """A tagged number span has no usable proportion value."""


class OutOfRange(UnparsableNumber):
    """The parsed value exceeds 100% and is outside the proportion domain."""


class NoNumberEntity(StatvizError):
    """The tag sequence contains no number entity."""


class ParseError(StatvizError):
    """A data file could not be parsed; message carries the location."""


class InvariantViolation(StatvizError):
    """A loaded asset breaks a manifest invariant; message names the asset."""


class Infeasible(StatvizError):
    """No discrete option combination satisfies the required constraints."""


class TooManyLines(StatvizError):
    """Requested line count exceeds the word count."""


class AccumulationOverflow(StatvizError):
    """Accumulated chart values exceed one."""


class NoCandidates(StatvizError):
    """Synthesis ruled out every combination.

    ``reasons`` lists one human-readable rule-out diagnostic per dropped
    blueprint or combination.
    """

    def __init__(self, message: str, reasons: list[str] | None = None):
        super().__init__(message)
        self.reasons = reasons or []


class MissingAsset(StatvizError):
    """A candidate references an icon or palette the library does not have."""


class RefineViolation(StatvizError):
    """A refinement request breaks an applicability constraint.

    ``constraint`` names the broken rule (e.g. "hollow_not_fillable").
    """

    def __init__(self, constraint: str, message: str | None = None):
        super().__init__(message or constraint)
        self.constraint = constraint
