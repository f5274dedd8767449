"""Exception types raised across the package."""


class DoBayesError(Exception):
    """Base class for all package-specific errors."""


class CycleDetected(DoBayesError):
    """The edge relation contains a directed cycle."""

    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("cycle detected: " + " -> ".join(self.cycle))


class UnknownEndpoint(DoBayesError):
    """An edge references a node that was not declared."""


class DuplicateEdge(DoBayesError):
    """The same parent -> child pair was declared twice."""


class UnknownNode(DoBayesError):
    """A named node does not exist in the diagram."""


class TargetIsIntervened(DoBayesError):
    """The query target coincides with the intervened node."""


class RootNodeHasNoCoefficients(DoBayesError):
    """Coefficient inference was requested for a parentless node."""


class MissingColumn(DoBayesError):
    """The dataset lacks a column required by the operation."""


class NumericalFailure(DoBayesError):
    """A numerical routine produced a non-finite intermediate."""


class AllWeightsUnderflow(DoBayesError):
    """Every candidate model's log posterior underflowed to -inf."""


class NonFiniteResult(DoBayesError):
    """A returned scalar was NaN or infinite."""


class EmptyInput(DoBayesError):
    """An operation requiring at least one element received none."""
