"""
Exceptions raised by hdrinterp. All derive from ValueError so callers that
catch ValueError keep working; the CLI turns any HdrError into exit code 1.
"""


class HdrError(ValueError):
    """Base class for hdrinterp data errors"""


class InvalidInputError(HdrError):
    """Pixel data outside its domain (non-finite, out of range)"""


class InvalidParameterError(HdrError):
    """A numeric parameter outside its valid range"""


class ShapeError(HdrError):
    """Frames or fields with mismatched dimensions"""


class ExposureMismatchError(HdrError):
    """Frames whose exposure tags or times cannot be combined"""


class DegeneratePairError(HdrError):
    """An exposure pair with identical exposure times"""


class TooSmallError(HdrError):
    """Frames too small for the requested operation"""


class TooShortError(HdrError):
    """Sequences with too few frames"""


class UnsupportedFormatError(HdrError):
    """Malformed or unsupported image files"""


class ManifestError(HdrError):
    """Invalid sequence manifest"""


class ConfigError(HdrError):
    """Invalid configuration file or value"""
