"""Knot diagrams, invariants and twist-knot classification."""
from .diagram import KnotDiagram, random_reidemeister_move, reidemeister_simplify
from .invariants import (
    MAX_BRACKET_CROSSINGS,
    alexander_polynomial,
    jones_in_t,
    kauffman_bracket,
    kauffman_bracket_jones,
)
from .polynomial import LaurentPolynomial
from .projection import (
    KnotReport,
    diagram_svg,
    identify,
    plane_basis,
    project,
    project_generic,
    random_direction,
)
from .twist import (
    KnotName,
    classify,
    figure_eight_diagram,
    plat_closure,
    trefoil_diagram,
    twist_knot_diagram,
    twist_table,
)

__all__ = [
    "KnotDiagram", "random_reidemeister_move", "reidemeister_simplify",
    "MAX_BRACKET_CROSSINGS", "alexander_polynomial", "jones_in_t", "kauffman_bracket",
    "kauffman_bracket_jones", "LaurentPolynomial", "KnotReport", "diagram_svg", "identify",
    "plane_basis", "project", "project_generic", "random_direction", "KnotName", "classify",
    "figure_eight_diagram", "plat_closure", "trefoil_diagram", "twist_knot_diagram",
    "twist_table",
]
