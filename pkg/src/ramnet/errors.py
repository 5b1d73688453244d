"""Exception hierarchy for the library.

Everything raised on purpose derives from :class:`RamnetError`, so callers
can catch one type at the boundary.  Persistence failures carry their own
subtree because loading a model document can fail in several distinct ways
that tooling may want to tell apart.
"""


class RamnetError(Exception):
    """Base class for all library errors."""


class EncodingError(RamnetError):
    """Invalid input to a binarizer, or a digit outside the RAM base."""


class MappingError(RamnetError):
    """Invalid tuple mapping: bad sizes, out-of-range indices, or an
    attempt to replace the mapping of a model that has already trained."""


class InputError(RamnetError):
    """Malformed model input: wrong pattern length, unknown label,
    non-finite regression target."""


class ModelError(RamnetError):
    """Operation requires model state that does not exist (for example
    classifying with no discriminators)."""


class NoInformationError(RamnetError):
    """A regression query whose accessed memory cells were never trained.

    Raised instead of returning a silent 0.0, which would corrupt metrics.
    """


class MeanDomainError(RamnetError):
    """A mean function was applied outside its domain (for example a
    geometric mean over non-positive cell averages)."""


class PersistenceError(RamnetError):
    """Base class for model-document save/load failures."""


class ParseError(PersistenceError):
    """The document is not well-formed JSON."""


class FormatVersionError(PersistenceError):
    """The document's formatVersion is not supported."""


class UnknownModelTypeError(PersistenceError):
    """The document's modelType is not one this library knows."""


class SchemaError(PersistenceError):
    """The document violates the model-document schema."""


class AddressRangeError(SchemaError):
    """A serialized cell address is negative or >= base**n."""


class CounterValueError(SchemaError):
    """A serialized access counter is not a positive integer."""
