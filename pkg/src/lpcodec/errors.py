"""Exception hierarchy.

Everything raised for bad user input derives from :class:`LpcodecError`;
the CLI maps that family to exit code 1 and anything else to exit code 2.
"""


class LpcodecError(Exception):
    """Base class for validation-level errors."""


class InadmissibleWord(LpcodecError):
    """A word outside a coding scheme's admissible domain (e.g. 0x80 for sign-magnitude)."""


class EmptyStreamError(LpcodecError):
    """An operation that needs at least one word received an empty stream."""


class DomainError(LpcodecError):
    """Argument outside the mathematical domain of a function."""


class InvalidParamError(LpcodecError):
    """Structurally invalid parameter (non-positive shape, bad scheme name, ...)."""


class AccumulatorOverflowError(LpcodecError):
    """A checked integer accumulation left the 32-bit range."""


class BundleError(LpcodecError):
    """Base class for tensor-bundle format errors."""


class ManifestParseError(BundleError):
    pass


class SizeMismatchError(BundleError):
    pass


class UnknownEncodingError(BundleError):
    pass


class DuplicateNameError(BundleError):
    pass


class DegenerateGroupWarning(UserWarning):
    """A quantization group was all zeros; scale fell back to 1.0."""
