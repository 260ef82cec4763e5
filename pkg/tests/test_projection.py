import xml.etree.ElementTree as ET

import numpy as np
import pytest

from conftest import parametric_trefoil
from lorenz_knots.errors import DegenerateProjection
from lorenz_knots.knots import KnotDiagram, diagram_svg, identify, project, project_generic
from lorenz_knots.knots.projection import plane_basis


def brute_force_gauss(points, direction):
    """Crossings by testing every segment pair; independent of the grid and vectorised paths."""
    d, e1, e2 = plane_basis(direction)
    X = np.asarray(points, float)
    n = len(X)
    events = []
    signs = {}
    label = 0
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            a0, a1 = X[i], X[(i + 1) % n]
            b0, b1 = X[j], X[(j + 1) % n]
            # solve a0 + s (a1 - a0) = b0 + u (b1 - b0) in the image plane
            A = np.array([[(a1 - a0) @ e1, -((b1 - b0) @ e1)],
                          [(a1 - a0) @ e2, -((b1 - b0) @ e2)]])
            rhs = np.array([(b0 - a0) @ e1, (b0 - a0) @ e2])
            if abs(np.linalg.det(A)) < 1e-14:
                continue
            s, u = np.linalg.solve(A, rhs)
            if not (0 < s < 1 and 0 < u < 1):
                continue
            ha = (a0 + s * (a1 - a0)) @ d
            hb = (b0 + u * (b1 - b0)) @ d
            over_a = ha > hb
            to, tu = ((a1 - a0), (b1 - b0)) if over_a else ((b1 - b0), (a1 - a0))
            signs[label] = int(np.sign(np.cross(to, tu) @ d))
            events.append((i + s, label, over_a))
            events.append((j + u, label, not over_a))
            label += 1
    events.sort()
    return KnotDiagram.from_gauss([(c, o) for _, c, o in events], signs, validate=False)


@pytest.mark.parametrize("seed", range(6))
def test_projection_matches_brute_force(seed):
    pts = parametric_trefoil(200)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(3)
    got = project(pts, v)
    assert got == brute_force_gauss(pts, v)
    got.validate()


def test_planar_circle_has_no_crossings():
    t = np.linspace(0, 2 * np.pi, 100, endpoint=False)
    circle = np.column_stack([np.cos(t), np.sin(t), np.zeros_like(t)])
    d = project(circle, (0.1, 0.2, 1.0))
    assert d.n_crossings == 0
    assert str(identify(circle, seed=0).name) == "unknot"


def test_trefoil_identified_from_many_directions():
    pts = parametric_trefoil()
    jones = set()
    for seed in range(10):
        rep = identify(pts, seed=seed)
        assert rep.verdict == "3_1"
        jones.add(rep.jones)
    # chirality does not depend on the viewing direction
    assert len(jones) == 1


def test_end_on_segment_is_degenerate():
    pts = parametric_trefoil(100)
    with pytest.raises(DegenerateProjection):
        project(pts, pts[1] - pts[0])


def test_end_on_closure_radial_segment(curves):
    c = curves["primary"]
    k = c.closure[0]
    radial = c.points[k + 1] - c.points[k]
    with pytest.raises(DegenerateProjection):
        project(c, radial)
    # a fresh random direction recovers
    diagram, direction, attempts = project_generic(c, np.random.default_rng(0), direction=radial)
    assert attempts >= 2
    assert not np.allclose(direction / np.linalg.norm(direction),
                           radial / np.linalg.norm(radial))


def test_triple_point_and_tangency_are_degenerate():
    star = np.array([[-1, 0, 0], [1, 0, 1], [1, 1, 2], [-1, -1, 3], [0, -1, 4], [0, 1, 5],
                     [-2, 2, 6]], dtype=float)
    with pytest.raises(DegenerateProjection):
        project(star, (0, 0, 1))
    overlap = np.array([[0, 0, 0], [2, 0, 0], [2, 1, 0], [1, 0, 1], [3, 0, 1], [3, 2, 0]],
                       dtype=float)
    with pytest.raises(DegenerateProjection):
        project(overlap, (0, 0, 1))


def test_crossing_through_vertex_is_degenerate():
    pts = np.array([[-1, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [0, -1, 1], [-1, -1, 0]],
                   dtype=float)
    with pytest.raises(DegenerateProjection):
        project(pts, (0, 0, 1))


def test_svg_is_wellformed():
    pts = parametric_trefoil(200)
    svg = diagram_svg(pts, (0.1, 0.2, 1.0), comment="trefoil")
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")
    assert len(root.findall("{http://www.w3.org/2000/svg}polyline")) == 3
