class SlkError(Exception):
    """Base class for errors raised by this package."""


class PreconditionError(SlkError, ValueError):
    """An operation was called on input outside its domain."""


class NotASolution(PreconditionError):
    """The Gram coefficients do not solve the Markov / rank-4 system."""


class InternalInconsistency(SlkError, RuntimeError):
    """The classifier reached a state its case analysis says cannot occur."""
