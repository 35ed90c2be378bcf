"""Exception types raised across the package."""


class EvigateError(Exception):
    """Base class for all package errors."""


class DuplicateDocument(EvigateError):
    def __init__(self, doc_id: str):
        super().__init__(f"document already ingested: {doc_id!r}")
        self.doc_id = doc_id


class EmptyRecord(EvigateError):
    def __init__(self, doc_id: str, index: int):
        super().__init__(f"record {index} of {doc_id!r} is empty")
        self.doc_id = doc_id
        self.index = index


class DimensionMismatch(EvigateError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"dimension mismatch: expected {expected}, got {got}")
        self.expected = expected
        self.got = got


class RemoteUnavailable(EvigateError):
    """The remote embedding service could not be reached in time."""


class ProtocolError(EvigateError):
    """A remote peer answered with a malformed payload."""


class GeneratorUnavailable(EvigateError):
    """The external answer generator could not be reached."""


class IndexFormatError(EvigateError):
    """An index file could not be decoded."""


class VersionMismatch(IndexFormatError):
    pass


class ChecksumMismatch(IndexFormatError):
    pass


class ConfigError(EvigateError):
    pass
