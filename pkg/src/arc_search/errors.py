"""Exception hierarchy shared across the package."""


class ArcSearchError(Exception):
    """Base class for all package errors."""


class DocumentParseError(ArcSearchError):
    """Malformed JSON input; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message)
        self.offset = offset


class SchemaError(ArcSearchError):
    """Structurally valid JSON that violates the ingest schema."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class EmptyTextError(ArcSearchError):
    """Text with no tokens was given to an embedder."""


class DegenerateVectorError(ArcSearchError):
    """Zero or non-finite vector where a normalizable one is required."""


class DimensionError(ArcSearchError):
    """Vector dimension does not match the index/provider dimension."""


class NormalizationError(ArcSearchError):
    """Vector handed to the index is not unit-norm."""


class ProviderError(ArcSearchError):
    """Remote embedding or summary provider failed; wraps the cause."""


class SnapshotError(ArcSearchError):
    """Snapshot file is corrupt; names the failing section."""

    def __init__(self, message: str, section: str | None = None):
        super().__init__(message)
        self.section = section


class EmptyQueryError(ArcSearchError):
    """Query text or token list is empty."""


class EmptyInputError(ArcSearchError):
    """Empty list where at least one element is required."""


class ParameterError(ArcSearchError):
    """Out-of-range or unknown scoring parameter / filter field."""


class NotFoundError(ArcSearchError):
    """Referenced document id is not in the corpus."""
