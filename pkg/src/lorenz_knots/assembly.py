"""Closing the heteroclinic cycle into a knot.

At a T-point the two unstable branches of the origin, the two stable
branches of ``p_plus``/``p_minus`` and a point at infinity form one closed
invariant curve.  Here it is realised in ordinary 3-space: every branch runs
inside the trapping sphere, and the two sphere-exit points are joined by a
radial segment, a great-circle arc on an inflated sphere and another radial
segment.  That closing arc sits in the complement of the ball holding the
rest of the curve and is unknotted there, so the knot type in the 3-sphere is
unaffected.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import AssemblyError, AntipodalDegeneracy
from .manifolds import connecting_sign, equilibria, manifold_branch
from .ode import Params, TrappingSphere, default_trapping_sphere
from .tpoint import TPoint

__all__ = [
    "ClosedCurve",
    "AssemblyConfig",
    "assemble_invariant_curve",
    "close_through_infinity",
    "min_separation",
    "resample",
    "AntipodalWarning",
]


class AntipodalWarning(UserWarning):
    """Exit points were antipodal; a tilted great circle was used instead."""


@dataclass
class ClosedCurve:
    """Closed polyline; the last point joins back to the first.

    ``markers`` maps names (``origin``, ``p_plus``, ``p_minus``,
    ``exit:p_plus``, ``exit:p_minus``) to vertex indices and ``closure`` is
    the inclusive index range of the synthetic closing arc.
    """

    points: np.ndarray
    markers: dict = field(default_factory=dict)
    closure: tuple | None = None
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.points)

    @property
    def diameter(self) -> float:
        lo, hi = self.points.min(axis=0), self.points.max(axis=0)
        return float(np.linalg.norm(hi - lo))

    def to_json(self, extra: dict | None = None) -> str:
        doc = {
            "points": [[float(c) for c in q] for q in self.points],
            "markers": {k: int(v) for k, v in self.markers.items()},
            "closure": list(self.closure) if self.closure is not None else None,
        }
        meta = dict(self.meta)
        if extra:
            meta.update(extra)
        if meta:
            doc["meta"] = meta
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "ClosedCurve":
        doc = json.loads(text)
        closure = tuple(doc["closure"]) if doc.get("closure") is not None else None
        return cls(np.array(doc["points"], dtype=float).reshape(-1, 3),
                   dict(doc.get("markers", {})), closure, doc.get("meta", {}))


@dataclass(frozen=True)
class AssemblyConfig:
    tol: float = 1e-10
    eps_rel: float = 1e-6
    delta_conn: float = 1e-4
    horizon: float = 50.0
    inflation: float = 3.0
    tol_tp: float = 1e-8
    delta_simple_rel: float = 1e-3
    max_vertices: int = 20_000
    closure_samples: int = 240
    check_simple: bool = True


def _slerp(ua, ub, s):
    omega = math.acos(max(-1.0, min(1.0, float(ua @ ub))))
    if omega < 1e-12:
        return np.outer(1 - s, ua) + np.outer(s, ub)
    so = math.sin(omega)
    return (np.outer(np.sin((1 - s) * omega) / so, ua) + np.outer(np.sin(s * omega) / so, ub))


def close_through_infinity(E_plus, E_minus, ts: TrappingSphere, inflation: float = 3.0,
                           samples: int = 240) -> np.ndarray:
    """Arc from ``E_plus`` to ``E_minus`` outside the trapping ball.

    Radial segment out to ``inflation * radius``, great-circle arc on that
    sphere, radial segment back in.  Endpoints are included.  Antipodal exit
    points make the great circle ambiguous; a deterministic tilted plane is
    used and an :class:`AntipodalWarning` is issued.
    """
    if not inflation > 1:
        raise ValueError("inflation must exceed 1")
    c = np.asarray(ts.center, dtype=float)
    R = float(ts.radius)
    ea, eb = np.asarray(E_plus, dtype=float), np.asarray(E_minus, dtype=float)
    for e in (ea, eb):
        if abs(np.linalg.norm(e - c) - R) > 1e-6 * R:
            raise ValueError("exit point is not on the trapping sphere")
    ua = (ea - c) / np.linalg.norm(ea - c)
    ub = (eb - c) / np.linalg.norm(eb - c)
    big = inflation * R
    n_rad = max(4, samples // 8)
    n_arc = max(8, samples - 2 * n_rad)
    r = np.linspace(R, big, n_rad)
    out_a = c + np.outer(r, ua)
    out_b = c + np.outer(r[::-1], ub)
    s = np.linspace(0.0, 1.0, n_arc)[1:-1]
    if np.linalg.norm(ua + ub) < 1e-9:
        warnings.warn(str(AntipodalDegeneracy("antipodal exit points")), AntipodalWarning,
                      stacklevel=2)
        helper = np.array([0.0, 0.0, 1.0]) if abs(ua[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
        w = helper - (helper @ ua) * ua
        w /= np.linalg.norm(w)
        first = _slerp(ua, w, np.clip(2 * s[s <= 0.5], 0, 1))
        second = _slerp(w, ub, np.clip(2 * s[s > 0.5] - 1, 0, 1))
        arc_dirs = np.vstack([first, second])
    else:
        arc_dirs = _slerp(ua, ub, s)
    arc = c + big * arc_dirs
    return np.vstack([out_a, arc, out_b])


def resample(points: np.ndarray, n: int) -> np.ndarray:
    """``n`` points equally spaced in arc length along an open polyline (ends kept)."""
    seg = np.linalg.norm(np.diff(points, axis=0), axis=1)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    if s[-1] == 0 or n >= len(points):
        return points
    target = np.linspace(0.0, s[-1], n)
    return np.column_stack([np.interp(target, s, points[:, k]) for k in range(3)])


def min_separation(points: np.ndarray, window: float) -> float:
    """Smallest distance between segments of a closed polyline that are more
    than ``window`` apart along the curve.

    Two segments count as apart when the arc length between their starts,
    less the longer of the two, exceeds ``window``.  The value is exact when
    it is at most ``window``; otherwise the result is only guaranteed to
    exceed ``window``.
    """
    P = np.asarray(points, dtype=float)
    Q = np.roll(P, -1, axis=0)
    seg_len = np.linalg.norm(Q - P, axis=1)
    arc = np.concatenate([[0.0], np.cumsum(seg_len)])
    total = arc[-1]
    # subdivide long segments so a midpoint tree sees every close pair
    h = max(window, 1e-12)
    mids, owners = [], []
    for i in range(len(P)):
        k = max(1, int(math.ceil(seg_len[i] / h)))
        t = (np.arange(k) + 0.5) / k
        mids.append(P[i] + np.outer(t, Q[i] - P[i]))
        owners.append(np.full(k, i))
    mids = np.vstack(mids)
    owners = np.concatenate(owners)
    tree = cKDTree(mids)
    pairs = tree.query_pairs(2.0 * h, output_type="ndarray")
    best = math.inf
    if len(pairs):
        i = owners[pairs[:, 0]]
        j = owners[pairs[:, 1]]
        gap = np.abs(arc[i] - arc[j])
        gap = np.minimum(gap, total - gap) - np.maximum(seg_len[i], seg_len[j])
        keep = (i != j) & (gap > window)
        for a, b in {(min(x, y), max(x, y)) for x, y in zip(i[keep], j[keep])}:
            best = min(best, _segment_distance(P[a], Q[a], P[b], Q[b]))
    if best == math.inf:
        # nothing within the search radius
        return float(2.0 * h) if len(P) > 3 else math.inf
    return best


def _segment_distance(p1, q1, p2, q2):
    d1, d2, r = q1 - p1, q2 - p2, p1 - p2
    a, e, f = d1 @ d1, d2 @ d2, d2 @ r
    c, b = d1 @ r, d1 @ d2
    denom = a * e - b * b
    s = 0.0 if denom <= 1e-300 else min(1.0, max(0.0, (b * f - c * e) / denom))
    t = (b * s + f) / e if e > 0 else 0.0
    if t < 0:
        t, s = 0.0, (min(1.0, max(0.0, -c / a)) if a > 0 else 0.0)
    elif t > 1:
        t, s = 1.0, (min(1.0, max(0.0, (b - c) / a)) if a > 0 else 0.0)
    return float(np.linalg.norm((p1 + s * d1) - (p2 + t * d2)))


def assemble_invariant_curve(tp, cfg: AssemblyConfig = AssemblyConfig()) -> ClosedCurve:
    """Build the closed invariant curve through the three equilibria and infinity.

    ``tp`` is a :class:`TPoint` (its residual must be below ``cfg.tol_tp``)
    or bare :class:`Params`.  The curve runs origin -> (unstable +) -> partner
    -> outer stable half of the partner -> closing arc -> outer stable half of
    the mirror partner -> mirror partner -> (unstable -, reversed) -> origin.

    Raises
    ------
    AssemblyError
        When the branches do not connect, i.e. the parameters are not a
        T-point to within ``delta_conn``.
    """
    if isinstance(tp, TPoint):
        if not tp.residual < cfg.tol_tp:
            raise AssemblyError(f"T-point residual {tp.residual:.3e} >= tol_tp {cfg.tol_tp:.1e}")
        p = tp.params
        expected = tp.partner
    else:
        p, expected = tp, None
    eqs = equilibria(p)
    ts = default_trapping_sphere(p)
    origin = eqs["origin"]

    def eps(eq):
        return cfg.eps_rel * (1.0 + float(np.linalg.norm(eq.location)))

    unstable = {}
    for sgn in (1, -1):
        br = manifold_branch(p, origin, sgn, eps=eps(origin), horizon=cfg.horizon, ts=ts,
                             tol=cfg.tol, delta_conn=cfg.delta_conn, all_equilibria=eqs)
        if br.termination != "converged-to-equilibrium":
            raise AssemblyError(
                f"unstable branch ({'+' if sgn > 0 else '-'}) of the origin ended with "
                f"'{br.termination}', not at p_plus/p_minus: no heteroclinic connection")
        unstable[sgn] = br
    pa, pb = unstable[1].target, unstable[-1].target
    if {pa, pb} != {"p_plus", "p_minus"}:
        raise AssemblyError(f"unstable branches end at {pa} and {pb}")
    if expected is not None and expected != pa:
        raise AssemblyError(f"(+) branch reached {pa}, T-point was solved for {expected}")

    outer = {}
    for kind in (pa, pb):
        eq = eqs[kind]
        br = manifold_branch(p, eq, -connecting_sign(eq), eps=eps(eq), horizon=cfg.horizon,
                             ts=ts, tol=cfg.tol, delta_conn=cfg.delta_conn, all_equilibria=eqs)
        if br.termination != "hit-sphere":
            raise AssemblyError(f"outer stable branch of {kind} ended with '{br.termination}'")
        outer[kind] = br

    ua = unstable[1].points
    ub = unstable[-1].points
    sa = outer[pa].points
    sb = outer[pb].points
    closure = close_through_infinity(sa[-1], sb[-1], ts, cfg.inflation, cfg.closure_samples)

    # consecutive pieces, each starting at its marker; the curve closes from
    # the last point (seed of the (-) branch) back to the origin
    pieces = [
        ("origin", np.vstack([origin.location, ua])),
        (pa, np.vstack([eqs[pa].location, sa[:-1]])),
        (f"exit:{pa}", closure[:-1]),
        (f"exit:{pb}", sb[::-1]),
        (pb, np.vstack([eqs[pb].location, ub[::-1]])),
    ]
    total = sum(len(x) for _, x in pieces)
    if total > cfg.max_vertices:
        budget = cfg.max_vertices - len(pieces)
        lengths = [float(np.sum(np.linalg.norm(np.diff(x, axis=0), axis=1))) for _, x in pieces]
        L = sum(lengths)
        pieces = [(name, resample(x, max(2, int(budget * li / L))))
                  for (name, x), li in zip(pieces, lengths)]
    points, markers = [], {}
    closure_range = None
    for name, x in pieces:
        markers[name] = len(points)
        if name == f"exit:{pa}":
            closure_range = (len(points), len(points) + len(x))
        points.extend(x)
    pts = np.array(points)
    curve = ClosedCurve(pts, markers, closure_range,
                        {"rho": p.rho, "sigma": p.sigma, "beta": p.beta,
                         "partner": pa, "sphere_radius": ts.radius,
                         "inflation": cfg.inflation, "tol": cfg.tol})
    if cfg.check_simple:
        delta = cfg.delta_simple_rel * curve.diameter
        sep = min_separation(pts, 3 * delta)
        curve.meta["min_separation"] = sep
        if not sep > delta:
            raise AssemblyError(f"assembled curve is not simple: separation {sep:.3e} <= {delta:.3e}")
    return curve
