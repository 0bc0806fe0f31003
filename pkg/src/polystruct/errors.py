"""Exception types shared across the toolkit."""


class PolystructError(Exception):
    """Base class for all toolkit errors."""


class InputError(PolystructError):
    """Malformed or out-of-range argument (dimension mismatch, bad grammar, ...)."""


class PreconditionError(InputError):
    """A documented operation precondition does not hold for the given input."""


class UnsupportedError(InputError):
    """The instance falls outside the supported regime (e.g. p = 2 quadratic rank)."""


class CapExceeded(PolystructError):
    """A resource cap (enumeration, search, unknowns) would be exceeded."""


class InternalConsistencyError(PolystructError):
    """A result failed its own re-verification; always a bug, never an input problem."""


class DecompositionFailed(PolystructError):
    """Every retry exceeded the error target; carries the best attempt."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class PartialResultError(PolystructError):
    """An iterative procedure ran out of budget; carries the partial result."""

    def __init__(self, message, partial=None, diagnostics=None):
        super().__init__(message)
        self.partial = partial
        self.diagnostics = dict(diagnostics or {})
