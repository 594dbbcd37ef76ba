"""Exception types shared across the toolkit."""


class CutkitError(Exception):
    """Base class for all toolkit errors."""


class GraphError(CutkitError):
    """Malformed graph input or an operation on an invalid vertex set."""


class FlowError(CutkitError):
    """A flow routine was called with inputs violating its preconditions."""


class ParameterError(CutkitError):
    """Parameters outside the validity range of the requested algorithm."""


class VerificationError(CutkitError):
    """An oracle refused an instance (e.g. too large to enumerate)."""


class InternalError(CutkitError):
    """An invariant the analysis guarantees was violated; indicates a bug."""
