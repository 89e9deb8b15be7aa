"""Exception hierarchy shared across the package."""


class TcensError(Exception):
    """Base class for all package errors."""


class CoincidentPoints(TcensError):
    """Bearing requested between two coincident points."""


class AntipodalPoints(TcensError):
    """Bearing requested between antipodal points (direction undefined)."""


class SpecMismatch(TcensError):
    """Operation received fields on incompatible grids."""


class IncompatibleFactor(TcensError):
    """Grid shape does not admit the requested coarsening factor."""


class DomainMismatch(TcensError):
    """Target grid is not covered by the source grid."""


class EmptyNeighborhood(TcensError):
    """No valid grid point inside the query radius."""


class MissingField(TcensError):
    """A required variable/level is absent from the field bundle."""


class MissingSteeringFields(MissingField):
    """Steering-level winds required for the advection estimate are absent."""


class SeedOutsideDomain(TcensError):
    """Tracker seed position falls outside the forecast grid."""


class CoincidentObservations(TcensError):
    """Track decomposition needs two distinct observed positions."""


class EmptyInput(TcensError):
    """Metric requested on an empty sample."""


class DegenerateOutcomes(TcensError):
    """ROC requested with all-event or all-non-event outcomes."""


class InsufficientSample(TcensError):
    """Too few fields to estimate tercile thresholds."""


class OutOfRange(TcensError):
    """Scalar argument outside its documented range."""


class TooFewMembers(TcensError):
    """Ensemble operation needs more members than were supplied."""


class MissingVariable(MissingField):
    """Perturbation energy needs all four perturbation variables."""


class VortexOutsideDomain(TcensError):
    """Synthetic vortex center is not inside the requested grid."""


class TrackExitsDomain(TcensError):
    """Prescribed synthetic track leaves the requested grid."""


class UnmatchedStorm(TcensError):
    """Forecast storm has no observed counterpart."""


class TimeMisalignment(TcensError):
    """Forecast and observed tracks are not on a shared time grid."""


class ManifestError(TcensError):
    """Run manifest is missing files or internally inconsistent."""
