"""Exception hierarchy for hia-lab.

Every error raised by the library derives from HIAError and carries the exit
code the CLI reports when it escapes a command.

Classes:
    HIAError: Base class for all library errors.
    SizeMismatchError: Dimension or length disagreement between operands.
    DomainError: Value outside its admissible domain (non-finite, out of range).
    ModelConfigError: Invalid network definition or weights/model mismatch.
    ConfigError: Invalid trojan configuration or index.
    FormatError: Malformed file content.
    TruncatedDataError: Input ended before a record was complete.
    EmptyProfileError: Profiling requested over an empty dataset.
    NoRoVError: No range of values satisfies the occurrence criterion.
    TriggerDesignFailedError: Trigger search exhausted its try budget.
    UnsupportedPayloadError: Payload requested on a layer that cannot host it.
"""


class HIAError(Exception):
    """Base class for all hia-lab errors."""

    exit_code: int = 3


class SizeMismatchError(HIAError, ValueError):
    """Raised when dims, lengths or shapes of operands disagree."""


class DomainError(HIAError, ValueError):
    """Raised when a value lies outside its admissible domain."""


class ModelConfigError(HIAError):
    """Raised for invalid network definitions (dim chain, layer parameters)."""


class ConfigError(HIAError):
    """Raised for trojan configurations that do not fit the network."""


class FormatError(HIAError):
    """Raised when file content does not follow its format."""


class TruncatedDataError(HIAError, OSError):
    """Raised when input ends early.

    Attributes:
        offset: Byte offset at which the missing data was expected.
    """

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (truncated at offset {offset})")
        self.offset = offset


class EmptyProfileError(HIAError):
    """Raised when profiling is requested over an empty dataset."""


class NoRoVError(HIAError):
    """Raised when no window holds exactly the requested occurrence count."""

    exit_code = 4


class TriggerDesignFailedError(HIAError):
    """Raised when every trigger-search try failed."""

    exit_code = 4


class UnsupportedPayloadError(HIAError):
    """Raised when a payload targets a layer that cannot be shuffled."""
