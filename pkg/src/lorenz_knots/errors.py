"""Exception hierarchy shared by the numerical and combinatorial layers."""


class LorenzKnotError(Exception):
    """Base class for all errors raised by this package."""

    #: process exit status used by the command-line harness
    exit_code = 1
    stage = "run"


class DomainError(LorenzKnotError, ValueError):
    """Parameters outside the region where an operation is defined."""

    exit_code = 2
    stage = "domain"


class StructureError(LorenzKnotError):
    """An equilibrium does not have the expected saddle type."""

    exit_code = 2
    stage = "equilibria"


class AssemblyError(LorenzKnotError):
    """The manifold branches do not close up into an invariant curve."""

    exit_code = 3
    stage = "assembly"


class NoConvergence(LorenzKnotError):
    """An iterative solver stopped without meeting its tolerance."""

    exit_code = 3
    stage = "tpoint"


class DegenerateProjection(LorenzKnotError):
    """A projection direction is not generic for the curve."""

    exit_code = 4
    stage = "projection"


class AntipodalDegeneracy(LorenzKnotError):
    """The closing great circle is not unique (antipodal exit points)."""

    stage = "assembly"


class TooManyCrossings(LorenzKnotError):
    """The diagram is too large for an exponential-time invariant."""

    stage = "invariants"


class DiagramError(LorenzKnotError, ValueError):
    """Malformed or unsupported knot diagram input."""

    stage = "invariants"
