"""Exception types raised across the package."""


class GeometryError(Exception):
    """Base class for all geometric failures."""


class DegeneratePatch(GeometryError):
    """The parametrization is not an immersion at the requested point."""


class InvalidRadius(GeometryError, ValueError):
    pass


class NonpositiveRadius(GeometryError, ValueError):
    pass


class NonRevolvable(GeometryError, ValueError):
    pass


class SelfIntersecting(GeometryError, ValueError):
    pass


class StitchMismatch(GeometryError):
    pass


class NotWatertight(GeometryError):
    pass


class OnSurface(GeometryError):
    """A query point lies on the mesh within the boundary tolerance."""


class OriginOnSurface(OnSurface):
    pass


class ProjectionUndefined(GeometryError):
    pass


class PatchBoundaryUnstitched(GeometryError):
    """A geodesic left the surface through an open edge."""


class PreconditionFailed(GeometryError):
    pass


class GeometryOverlap(GeometryError, ValueError):
    pass


class NoFeasibleStart(GeometryError):
    pass


class SpecError(ValueError):
    """Surface spec could not be parsed; carries a 1-based line and column."""

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
