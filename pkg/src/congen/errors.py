"""Exception hierarchy shared by all modules."""


class CongenError(Exception):
    """Base class for every error raised by congen."""


class MalformedInputError(CongenError, ValueError):
    """Input data (tables, files, arguments) violates a structural invariant."""


class SizeLimitError(CongenError):
    """A construction would exceed the configured universe size cap."""


class SignatureError(CongenError):
    """Two algebras do not share the same operation signature."""


class NotACongruenceError(CongenError):
    """A partition is not preserved by the operations of an algebra."""


class PreconditionError(CongenError):
    """An operation was called outside its stated preconditions."""


class UnsupportedShapeError(PreconditionError):
    """Lattice analysis requested on a lattice of unsupported shape (e.g. non-modular)."""


class InapplicableError(PreconditionError):
    """A decision theorem's hypotheses are not met by the input."""


class InconclusiveError(CongenError):
    """A bounded search ended without an answer (e.g. no Mal'cev term within budget)."""
