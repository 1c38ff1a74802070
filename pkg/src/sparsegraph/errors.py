"""Error taxonomy shared by all sparsegraph modules.

Every toolkit-raised error derives from SparseGraphError so callers (and the
CLI) can distinguish toolkit failures from programming errors.
"""


class SparseGraphError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(SparseGraphError):
    """Invalid configuration or argument values."""


class OutOfRangeError(ValidationError):
    """A node id falls outside [0, num_nodes)."""


class FormatError(SparseGraphError):
    """A file does not conform to its declared on-disk format."""


class ParseError(FormatError):
    """A text input failed to parse; message carries file and line context."""


class CapacityError(SparseGraphError):
    """Input exceeds the index capacity of the current build."""


class FileError(SparseGraphError):
    """I/O failure, wrapped with path context."""
