"""Exception hierarchy for the stick-juggling model."""


class JugglingError(ValueError):
    """Base class for every domain error raised by this package."""


class OffsetOutOfRange(JugglingError):
    """Point of application lies outside the stick, i.e. ``r`` not in ``[0, ell/2]``."""


class DegenerateSection(JugglingError):
    """The section angle makes ``sin(beta_star)`` vanish."""


class NonDescendingPostImpulse(JugglingError):
    """The post-impulse pitch rate is not negative, so no flight phase exists.

    ``step`` is filled in by the simulator when the error surfaces mid-run.
    """

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class InfeasibleFlightTime(JugglingError):
    """Requested time of flight is shorter than the minimum allowed by ``r <= ell/2``."""


class FixedPointDrift(JugglingError):
    """A fixed point handed to the linearizer does not satisfy the map closely enough."""


class RiccatiDivergence(JugglingError):
    """The Riccati recursion did not converge within its iteration cap."""


class NotStabilizable(JugglingError):
    """The converged gain leaves a closed-loop eigenvalue on or outside the unit circle."""


class NoSectionCrossing(JugglingError):
    """Free flight does not reach the section within the given horizon."""
