"""Exception types shared across the package."""


class NeuGraspError(Exception):
    """Base class for all package-specific errors."""


class PlacementFailure(NeuGraspError):
    """Scene layout could not place all objects without interpenetration."""


class EmptyScene(NeuGraspError):
    """Operation requires at least one object in the scene."""


class FormatError(NeuGraspError):
    """On-disk payload has a wrong schema, shape, or checksum."""


class ShapeError(NeuGraspError):
    """Tensor/array shape violates an operation's contract."""


class OutOfBounds(NeuGraspError):
    """Query point or pixel lies outside the valid domain."""


class NoIntersection(NeuGraspError):
    """Ray does not intersect the workspace box."""


class NoValidViews(NeuGraspError):
    """Every view was masked out; aggregation is undefined."""


class DomainError(NeuGraspError):
    """Scalar argument outside its mathematical domain (e.g. s <= 0)."""


class LengthMismatch(NeuGraspError):
    """Paired sequences have different lengths."""


class GridMismatch(NeuGraspError):
    """Two volumes do not share the same GridSpec."""


class NonFiniteLoss(NeuGraspError):
    """Training loss became NaN/Inf; aborts the run with a diagnostic dump."""


class EmptyLogs(NeuGraspError):
    """Metrics requested over an empty collection of round logs."""
