"""Planar projection of closed space polygons to knot diagrams, and the identification pipeline."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from ..errors import DegenerateProjection
from .diagram import KnotDiagram, reidemeister_simplify
from .invariants import MAX_BRACKET_CROSSINGS, alexander_polynomial, kauffman_bracket_jones
from .polynomial import LaurentPolynomial
from .twist import KnotName, classify

__all__ = [
    "GENERIC_TOL",
    "MAX_DIRECTION_RETRIES",
    "plane_basis",
    "project",
    "project_generic",
    "random_direction",
    "identify",
    "KnotReport",
    "diagram_svg",
]

GENERIC_TOL = 1e-9
MAX_DIRECTION_RETRIES = 20


def _points(curve) -> np.ndarray:
    pts = np.asarray(getattr(curve, "points", curve), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) < 3:
        raise ValueError("curve must be an (N, 3) array with N >= 3")
    # repeated vertices carry no geometry
    keep = np.any(pts != np.roll(pts, 1, axis=0), axis=1)
    pts = pts[keep]
    if len(pts) < 3:
        raise ValueError("curve has fewer than three distinct vertices")
    return pts


def plane_basis(direction) -> tuple:
    """Unit ``(d, e1, e2)`` with ``e1 x e2 = d``; viewing from ``+d``, depth ``p . d`` is height."""
    d = np.asarray(direction, dtype=float)
    nrm = np.linalg.norm(d)
    if not nrm > 0:
        raise ValueError("direction must be nonzero")
    d = d / nrm
    helper = np.eye(3)[int(np.argmin(np.abs(d)))]
    e1 = np.cross(helper, d)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(d, e1)
    return d, e1, e2


def _candidate_pairs(P):
    """Index pairs ``i < j`` of non-adjacent segments whose bounding boxes share a grid cell."""
    n = len(P)
    A, B = P, np.roll(P, -1, axis=0)
    lo, hi = np.minimum(A, B), np.maximum(A, B)
    extent = float(np.max(hi.max(axis=0) - lo.min(axis=0)))
    seg = np.linalg.norm(B - A, axis=1)
    cell = max(float(np.median(seg)) * 2.0, extent / max(1.0, np.sqrt(n)), 1e-300)
    origin = lo.min(axis=0)
    c0 = np.floor((lo - origin) / cell).astype(np.int64)
    c1 = np.floor((hi - origin) / cell).astype(np.int64)
    grid = {}
    for i in range(n):
        for gx in range(c0[i, 0], c1[i, 0] + 1):
            for gy in range(c0[i, 1], c1[i, 1] + 1):
                grid.setdefault((gx, gy), []).append(i)
    pairs = set()
    for members in grid.values():
        if len(members) < 2:
            continue
        for a in range(len(members)):
            i = members[a]
            for b in range(a + 1, len(members)):
                j = members[b]
                if i > j:
                    i2, j2 = j, i
                else:
                    i2, j2 = i, j
                if j2 - i2 == 1 or (i2 == 0 and j2 == n - 1):
                    continue
                pairs.add((i2, j2))
    if not pairs:
        return np.empty((0, 2), dtype=np.int64)
    return np.array(sorted(pairs), dtype=np.int64)


def _project_geometry(curve, direction, tol: float = GENERIC_TOL):
    """Crossings of the projected polygon.

    Returns ``(uv, depth, crossings)``; each crossing is
    ``(i, s, j, u, over_is_i, sign, point)`` for segment parameters ``s``
    on segment ``i`` and ``u`` on segment ``j``.
    """
    X = _points(curve)
    d, e1, e2 = plane_basis(direction)
    uv = np.column_stack([X @ e1, X @ e2])
    depth = X @ d
    n = len(uv)
    scale = float(np.max(np.ptp(uv, axis=0)))
    eps = tol * max(scale, 1e-300)
    r = np.roll(uv, -1, axis=0) - uv
    rl = np.linalg.norm(r, axis=1)
    r3 = np.linalg.norm(np.roll(X, -1, axis=0) - X, axis=1)
    end_on = rl < tol * r3
    if np.any(end_on):
        k = int(np.flatnonzero(end_on)[0])
        raise DegenerateProjection(f"segment {k} is parallel to the projection direction")
    pairs = _candidate_pairs(uv)
    crossings = []
    if len(pairs):
        i, j = pairs[:, 0], pairs[:, 1]
        p, q = uv[i], uv[j]
        ri, rj = r[i], r[j]
        den = ri[:, 0] * rj[:, 1] - ri[:, 1] * rj[:, 0]
        qp = q - p
        with np.errstate(divide="ignore", invalid="ignore"):
            s = (qp[:, 0] * rj[:, 1] - qp[:, 1] * rj[:, 0]) / den
            u = (qp[:, 0] * ri[:, 1] - qp[:, 1] * ri[:, 0]) / den
        sin = np.abs(den) / (rl[i] * rl[j])
        # near-parallel pairs that come close are not generic
        par = sin < tol
        if np.any(par):
            for k in np.flatnonzero(par):
                if _segment_gap(p[k], ri[k], q[k], rj[k]) < eps:
                    raise DegenerateProjection("near-tangent segments in projection")
        ok = (~par) & (s >= -tol) & (s <= 1 + tol) & (u >= -tol) & (u <= 1 + tol)
        for k in np.flatnonzero(ok):
            sk, uk = float(s[k]), float(u[k])
            a, b = int(i[k]), int(j[k])
            near_vertex = min(abs(sk), abs(1 - sk)) < tol or min(abs(uk), abs(1 - uk)) < tol
            if near_vertex:
                raise DegenerateProjection("crossing at a projected vertex")
            if not (0 < sk < 1 and 0 < uk < 1):
                continue
            da = depth[a] + sk * (depth[(a + 1) % n] - depth[a])
            db = depth[b] + uk * (depth[(b + 1) % n] - depth[b])
            if abs(da - db) < eps:
                raise DegenerateProjection("strands meet in space along this direction")
            over_a = da > db
            ro, ru = (r[a], r[b]) if over_a else (r[b], r[a])
            sign = 1 if ro[0] * ru[1] - ro[1] * ru[0] > 0 else -1
            pt = uv[a] + sk * r[a]
            crossings.append((a, sk, b, uk, over_a, sign, pt))
    if len(crossings) > 1:
        pts = np.array([c[6] for c in crossings])
        if cKDTree(pts).query_pairs(eps):
            raise DegenerateProjection("triple point in projection")
    return uv, depth, crossings


def _segment_gap(p, r, q, s):
    """Distance between planar segments ``p + [0,1] r`` and ``q + [0,1] s`` (parallel case)."""
    best = np.inf
    for a, v, b in ((p, r, q), (p, r, q + s), (q, s, p), (q, s, p + r)):
        vv = float(v @ v)
        t = 0.0 if vv == 0 else min(1.0, max(0.0, float((b - a) @ v) / vv))
        best = min(best, float(np.linalg.norm(a + t * v - b)))
    return best


def project(curve, direction, tol: float = GENERIC_TOL) -> KnotDiagram:
    """Orthogonal projection along ``direction`` as a signed Gauss code.

    The point with larger ``p . direction`` passes over.  Raises
    ``DegenerateProjection`` on near-tangent crossings, triple points,
    crossings at vertices or segments seen end-on.  Angles and segment
    parameters are tested against ``tol`` directly, distances against
    ``tol`` times the projected size.
    """
    _, _, crossings = _project_geometry(curve, direction, tol)
    visits = []
    signs = {}
    for k, (a, s, b, u, over_a, sign, _) in enumerate(crossings):
        visits.append((a + s, k, over_a))
        visits.append((b + u, k, not over_a))
        signs[k] = sign
    visits.sort()
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    return KnotDiagram.from_gauss([(k, o) for _, k, o in visits], signs,
                                  {"direction": [float(c) for c in d]}, validate=False)


def random_direction(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def project_generic(curve, rng: np.random.Generator, direction=None,
                    retries: int = MAX_DIRECTION_RETRIES, tol: float = GENERIC_TOL):
    """Project along ``direction`` (or a random one), drawing new ones on degeneracy.

    Returns ``(diagram, direction, attempts)``.
    """
    last = None
    for attempt in range(retries + 1):
        if direction is None or attempt > 0:
            direction = random_direction(rng)
        try:
            return project(curve, direction, tol), np.asarray(direction, float), attempt + 1
        except DegenerateProjection as exc:
            last = exc
    raise DegenerateProjection(f"no generic direction after {retries + 1} attempts: {last}")


@dataclass
class KnotReport:
    name: KnotName
    alexander: LaurentPolynomial
    jones: LaurentPolynomial | None
    diagram: KnotDiagram
    raw_crossings: int
    direction: np.ndarray
    attempts: int
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return str(self.name)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "alexander": str(self.alexander),
            "jones_q": str(self.jones) if self.jones is not None else None,
            "crossings": self.diagram.n_crossings,
            "raw_crossings": self.raw_crossings,
            "direction": [float(c) for c in self.direction],
            "attempts": self.attempts,
            "seed": self.seed,
        }


def identify(curve, seed: int = 0, direction=None, rng: np.random.Generator | None = None,
             with_jones: bool = True) -> KnotReport:
    """project -> simplify -> Alexander (+ Jones when small enough) -> classify."""
    rng = rng if rng is not None else np.random.default_rng(seed)
    raw, direction, attempts = project_generic(curve, rng, direction)
    simple = reidemeister_simplify(raw)
    alex = alexander_polynomial(simple)
    jones = None
    if with_jones and simple.n_crossings <= MAX_BRACKET_CROSSINGS:
        jones = kauffman_bracket_jones(simple)
    return KnotReport(classify(alex), alex, jones, simple, raw.n_crossings, direction,
                      attempts, seed)


def diagram_svg(curve, direction, size: float = 600.0, gap: float = 0.012,
                comment: str | None = None) -> str:
    """SVG drawing of the projection with gaps in the under-strands."""
    uv, _, crossings = _project_geometry(curve, direction)
    n = len(uv)
    lo = uv.min(axis=0)
    span = float(np.max(np.ptp(uv, axis=0))) or 1.0
    margin = 0.04 * size
    xy = (uv - lo) / span * (size - 2 * margin) + margin
    xy[:, 1] = size - xy[:, 1]
    # parameter cuts along each under segment
    cuts = {}
    for a, s, b, u, over_a, _, _ in crossings:
        seg, par = (b, u) if over_a else (a, s)
        cuts.setdefault(seg, []).append(par)
    g = gap * size
    paths = []
    current = [xy[0]]
    for i in range(n):
        p0, p1 = xy[i], xy[(i + 1) % n]
        length = float(np.linalg.norm(p1 - p0)) or 1.0
        for par in sorted(cuts.get(i, [])):
            dpar = g / length
            current.append(p0 + max(0.0, par - dpar) * (p1 - p0))
            paths.append(current)
            current = [p0 + min(1.0, par + dpar) * (p1 - p0)]
        current.append(p1)
    if paths and cuts:
        paths[0] = current + paths[0][1:]
    else:
        paths.append(current)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:g}" height="{size:g}" '
           f'viewBox="0 0 {size:g} {size:g}">']
    if comment:
        out.append(f"<!-- {comment} -->")
    out.append('<rect width="100%" height="100%" fill="white"/>')
    for path in paths:
        pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in path)
        out.append(f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="1.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
