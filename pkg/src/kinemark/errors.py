"""The exception hierarchy used throughout kinemark

Every error derives from :class:`KinemarkError` and, since they all describe
invalid data or arguments, from ``ValueError`` too. The structured context of
each error is available as attributes so that callers (and the CLI) can report
or skip the offending participant without parsing messages.
"""

__all__ = [
    "KinemarkError",
    "MissingColumn",
    "NonFiniteSample",
    "RateMismatch",
    "EmptyRecording",
    "InvalidOutcome",
    "RecordingTooShort",
    "SeriesTooShort",
    "NonIntegralWindow",
    "FeatureError",
    "InsufficientClass",
    "EmptyMatrix",
    "SingleClassTraining",
    "MinorityTooSmall",
    "LeakageError",
    "NonFiniteInput",
    "SchemaMismatch",
    "LengthMismatch",
    "UnsupportedFormat",
    "ConfigError",
    "AbortedRepetition",
    "ModelFormatError",
    "DuplicateParticipant",
]


class KinemarkError(ValueError):
    def __reduce__(self):
        # Subclasses take structured arguments, so rebuild from the stored state
        return _restore, (type(self), self.args, self.__dict__)


def _restore(cls: type, args: tuple, state: dict) -> "KinemarkError":
    error = cls.__new__(cls)
    error.args = args
    error.__dict__.update(state)
    return error


class MissingColumn(KinemarkError):
    def __init__(self, column: str):
        self.column = column
        super().__init__(f"The recording has no column named '{column}'")


class NonFiniteSample(KinemarkError):
    def __init__(self, row: int, column: str):
        self.row = row
        self.column = column
        super().__init__(
            f"Non-finite or non-numeric sample in column '{column}' at row {row}"
        )


class RateMismatch(KinemarkError):
    def __init__(self, observed_hz: float, declared_hz: float):
        self.observed_hz = observed_hz
        self.declared_hz = declared_hz
        super().__init__(
            f"The time column implies a sample rate of {observed_hz:.4f} Hz, "
            f"but {declared_hz:.4f} Hz was declared"
        )


class EmptyRecording(KinemarkError):
    def __init__(self, source: str = "recording"):
        self.source = source
        super().__init__(f"The {source} contains no samples")


class InvalidOutcome(KinemarkError):
    def __init__(self, value: object):
        self.value = value
        super().__init__(f"Outcome must be 'Well' or 'Sick', got {value!r}")


class RecordingTooShort(KinemarkError):
    def __init__(self, participant_id: str, required_s: float, actual_s: float):
        self.participant_id = participant_id
        self.required_s = required_s
        self.actual_s = actual_s
        super().__init__(
            f"Participant '{participant_id}' has {actual_s:g} s of data, "
            f"but {required_s:g} s are required"
        )


class SeriesTooShort(KinemarkError):
    def __init__(self, length: int, minimum: int):
        self.length = length
        self.minimum = minimum
        super().__init__(
            f"A series of length {length} was given, but at least {minimum} "
            "samples are required"
        )


class NonIntegralWindow(KinemarkError):
    pass


class FeatureError(KinemarkError):
    def __init__(self, order: str, channel: str, cause: Exception):
        self.order = order
        self.channel = channel
        self.cause = cause
        super().__init__(f"Feature extraction failed for {order}_{channel}: {cause}")


class InsufficientClass(KinemarkError):
    pass


class EmptyMatrix(KinemarkError):
    pass


class SingleClassTraining(KinemarkError):
    def __init__(self, label: int | None = None):
        self.label = label
        super().__init__(
            "Training data must contain both classes"
            + ("" if label is None else f"; only class {label} is present")
        )


class MinorityTooSmall(KinemarkError):
    def __init__(self, count: int):
        self.count = count
        super().__init__(
            f"SMOTE needs at least 2 minority samples, but {count} were given"
        )


class LeakageError(KinemarkError):
    def __init__(self, participants: set[str]):
        self.participants = participants
        super().__init__(
            "Participants contribute rows to both the training and the test set: "
            + ", ".join(sorted(participants))
        )


class NonFiniteInput(KinemarkError):
    pass


class SchemaMismatch(KinemarkError):
    pass


class LengthMismatch(KinemarkError):
    pass


class UnsupportedFormat(KinemarkError):
    def __init__(self, fmt: str, supported: tuple[str, ...]):
        self.format = fmt
        super().__init__(
            f"Unsupported format '{fmt}'; expected one of {', '.join(supported)}"
        )


class ConfigError(KinemarkError):
    pass


class AbortedRepetition(KinemarkError):
    def __init__(self, index: int, cause: BaseException):
        self.index = index
        self.cause = cause
        super().__init__(f"Repetition {index} failed: {cause}")


class ModelFormatError(KinemarkError):
    pass


class DuplicateParticipant(KinemarkError):
    def __init__(self, participant_id: str):
        self.participant_id = participant_id
        super().__init__(f"Participant '{participant_id}' appears more than once")
