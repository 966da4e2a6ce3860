"""Exception types shared across the package.

Query-language errors carry a character offset (into the preprocessed query
string) so callers can point at the offending token.
"""


class ScreenSeekError(Exception):
    """Base class for all package-specific errors."""

    code = "Error"


# --- hierarchy / ingestion ---

class MalformedXml(ScreenSeekError):
    code = "MalformedXml"


class MalformedBounds(ScreenSeekError):
    code = "MalformedBounds"


class ManifestError(ScreenSeekError):
    code = "ManifestError"


class ResolverFailure(ScreenSeekError):
    code = "ResolverFailure"


# --- images / color ---

class ImageTooSmall(ScreenSeekError):
    code = "ImageTooSmall"


class EmptyImage(ScreenSeekError):
    code = "EmptyImage"


class UnsupportedImage(ScreenSeekError):
    code = "UnsupportedImage"


class UnknownColor(ScreenSeekError):
    code = "UnknownColor"


# --- index ---

class DuplicateDocId(ScreenSeekError):
    code = "DuplicateDocId"


class IndexIoError(ScreenSeekError):
    code = "IndexIoError"


class CorruptIndex(ScreenSeekError):
    code = "CorruptIndex"


class UnknownDoc(ScreenSeekError):
    code = "UnknownDoc"


# --- query language ---

class QueryError(ScreenSeekError):
    """Base for parser errors. ``offset`` indexes into the preprocessed query."""

    code = "QueryError"

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message)
        self.offset = offset


class EmptyQuery(QueryError):
    code = "EmptyQuery"


class UnbalancedParens(QueryError):
    code = "UnbalancedParens"


class AmbiguousOperators(QueryError):
    code = "AmbiguousOperators"


class DanglingOperator(QueryError):
    code = "DanglingOperator"


class InvalidPrefix(QueryError):
    code = "InvalidPrefix"


class InvalidColorValue(QueryError):
    code = "InvalidColorValue"
