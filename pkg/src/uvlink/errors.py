"""Exception and warning types shared across the package."""


class UVLinkError(Exception):
    """Base class for all uvlink errors."""


class InvalidMeshError(UVLinkError):
    """Mesh violates a structural invariant (empty, bad indices, degenerate)."""


class ModeError(UVLinkError):
    """Command issued in a session mode that does not allow it."""


class MissingDataError(UVLinkError):
    """Saving a relation group with an empty marker list on either canvas."""


class RangeError(UVLinkError):
    """A value fell outside its configured range (brush radius, viewport, f)."""


class FormatError(UVLinkError):
    """Malformed or unsupported file content.

    Carries an optional location (line number or record index) so parsers
    can point at the offending input.
    """

    def __init__(self, message, *, line=None, record=None):
        self.line = line
        self.record = record
        if line is not None:
            message = f"line {line}: {message}"
        elif record is not None:
            message = f"record {record}: {message}"
        super().__init__(message)


class PendingStampWarning(UserWarning):
    """Pending stamp count crossed the configured warn threshold."""


class UnsavedWorkWarning(UserWarning):
    """Mode switch discarded pending stamps or unsaved markers."""
