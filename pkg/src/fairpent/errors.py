"""Exception hierarchy shared by all modules."""


class FairTilingError(Exception):
    """Base class for domain failures (mapped to CLI exit code 1)."""


class DegenerateGeometryError(FairTilingError, ValueError):
    """Polygon input too degenerate to measure (too few or coincident vertices)."""


class SolverError(FairTilingError):
    """Base for nonlinear solver failures; carries the last report when known."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SingularJacobianError(SolverError):
    pass


class RankDeficiencyError(SolverError):
    pass


class NonConvergenceError(SolverError):
    pass


class SplitFailureError(FairTilingError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NeighborhoodExceededError(SplitFailureError):
    """Hexagon too far from regular for the three-pentagon split."""


class PerturbationFailureError(FairTilingError):
    pass


class GenerationFailureError(FairTilingError):
    def __init__(self, message, cluster=None):
        super().__init__(message)
        self.cluster = cluster
