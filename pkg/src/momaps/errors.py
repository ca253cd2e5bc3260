"""Exception and warning types shared across the package."""


class MomapsError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(MomapsError):
    """A graph failed structural validation."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class ParseError(MomapsError):
    """A JSON document does not describe a graph."""


class NonHalfIntegerDegree(MomapsError):
    """Face/vertex counts are inconsistent with any half-integer degree.

    This can only happen on a corrupted graph; valid graphs always have
    half-integer degree and integer left-right genus.
    """


class NotALoop(MomapsError):
    """remove_loop was asked to remove an edge that is not a loop."""


class NotAMelon(MomapsError):
    """remove_melon was asked to remove a triple edge that is not a melon."""


class NotPlanar(MomapsError):
    """A planar-only computation was applied to a non-planar graph."""


class InvalidColoring(MomapsError):
    """An edge-colored bipartite graph violates the coloring rules."""


class InconsistentSubstitution(MomapsError):
    """A chain substitution does not match the chain-vertex type."""


class UnstabilizedCatalog(UserWarning):
    """A scheme catalog was used although its scan had not stabilized."""
