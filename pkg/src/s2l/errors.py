"""Exception hierarchy shared across the package."""


class S2LError(Exception):
    """Base class for all library-specific errors."""


class StructuralError(S2LError):
    """A problem, rendering set, or table violates its structural contract."""


class SequenceParseError(S2LError):
    """A sequence description does not conform to the description grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class MappingError(S2LError):
    """A name cannot be mapped back to a symbol."""


class LookupMissError(S2LError):
    """A key is absent from a name table."""

    def __init__(self, key: str, table_name: str = ""):
        where = f" in table {table_name!r}" if table_name else ""
        super().__init__(f"no entry for key {key!r}{where}")
        self.key = key


class ToolUnavailableError(S2LError):
    """No deterministic converter exists for the symbol kind."""


class DatasetError(S2LError):
    """A dataset file or record cannot be loaded."""

    def __init__(self, message: str, record_index: int | None = None):
        if record_index is not None:
            message = f"record {record_index}: {message}"
        super().__init__(message)
        self.record_index = record_index


class BackendError(S2LError):
    """A backend call failed after retries."""

    def __init__(self, message: str, status: int | None = None):
        super().__init__(message)
        self.status = status


class EmptyResponseError(S2LError):
    """The backend returned an empty or whitespace-only assistant text."""


class CacheMissError(S2LError):
    """A replay backend found no cached response for the request."""


class ConfigError(S2LError):
    """A run configuration is invalid."""


class ExtractionMissError(S2LError):
    """No parsable answer was found in a model response."""


class DegenerateInputError(S2LError):
    """A metric is undefined for the given input (e.g. zero variance)."""
