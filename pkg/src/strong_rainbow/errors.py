"""Exception types raised across the package."""


class SrcError(Exception):
    """Base class for all errors raised by strong_rainbow."""


class GraphFormatError(SrcError, ValueError):
    """Malformed edge-list input."""


class EmptyGraphError(SrcError, ValueError):
    """No edges remain after normalization."""


class DisconnectedGraphError(SrcError, ValueError):
    """An operation that needs a connected graph got a disconnected one."""


class PathBudgetExceeded(SrcError):
    """Shortest-path enumeration or search would exceed the configured budget."""


class SizeGuardExceeded(SrcError):
    """Instance is larger than an exact routine is allowed to attempt."""


class TimeLimitExceeded(SrcError):
    """An exact routine ran out of its time allowance."""


class Exhausted(SrcError):
    """Exhaustive search found no coloring within the allowed number of colors."""


class BackendFailure(SrcError):
    """A MIP backend failed to run or returned something unusable."""
