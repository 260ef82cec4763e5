"""Knots formed by heteroclinic connections of the Lorenz equations at T-points."""
__version__ = "0.1.0"

from .assembly import AssemblyConfig, ClosedCurve, assemble_invariant_curve, close_through_infinity
from .errors import (
    AssemblyError,
    DegenerateProjection,
    DiagramError,
    DomainError,
    LorenzKnotError,
    NoConvergence,
    StructureError,
    TooManyCrossings,
)
from .knots import (
    KnotDiagram,
    KnotName,
    LaurentPolynomial,
    alexander_polynomial,
    classify,
    identify,
    kauffman_bracket_jones,
    project,
    reidemeister_simplify,
)
from .manifolds import equilibria, manifold_branch
from .ode import CLASSICAL, Params, Trajectory, integrate, vector_field
from .template import orbit_knot_type, template_orbit, word_to_matrix
from .tpoint import MissConfig, TPoint, find_tpoint, miss_distance, sweep

__all__ = [
    "__version__",
    "AssemblyConfig", "ClosedCurve", "assemble_invariant_curve", "close_through_infinity",
    "AssemblyError", "DegenerateProjection", "DiagramError", "DomainError", "LorenzKnotError",
    "NoConvergence", "StructureError", "TooManyCrossings",
    "KnotDiagram", "KnotName", "LaurentPolynomial", "alexander_polynomial", "classify",
    "identify", "kauffman_bracket_jones", "project", "reidemeister_simplify",
    "equilibria", "manifold_branch",
    "CLASSICAL", "Params", "Trajectory", "integrate", "vector_field",
    "orbit_knot_type", "template_orbit", "word_to_matrix",
    "MissConfig", "TPoint", "find_tpoint", "miss_distance", "sweep",
]
