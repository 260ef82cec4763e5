"""Equilibria of the Lorenz system and their one-dimensional invariant manifolds."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, StructureError
from .ode import (
    BallEvent,
    Params,
    Trajectory,
    TrappingSphere,
    default_trapping_sphere,
    integrate,
    jacobian,
    mirror,
    sphere_exit_event,
)

__all__ = [
    "Equilibrium",
    "ManifoldBranch",
    "equilibria",
    "eigenpairs",
    "one_dim_direction",
    "default_eps",
    "manifold_branch",
    "connecting_sign",
    "KINDS",
]

KINDS = ("origin", "p_plus", "p_minus")


@dataclass(frozen=True, eq=False)
class Equilibrium:
    kind: str
    location: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns

    def __repr__(self):
        loc = ", ".join(f"{c:.6g}" for c in self.location)
        return f"Equilibrium({self.kind}, ({loc}))"


def _charpoly(J):
    # lambda^3 + a lambda^2 + b lambda + c
    a = -np.trace(J)
    b = (J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
         + J[0, 0] * J[2, 2] - J[0, 2] * J[2, 0]
         + J[1, 1] * J[2, 2] - J[1, 2] * J[2, 1])
    c = -np.linalg.det(J)
    return a, b, c


def _null_vector(M):
    rows = [M[0], M[1], M[2]]
    best = None
    for i, j in ((0, 1), (0, 2), (1, 2)):
        v = np.cross(rows[i], rows[j])
        n = np.linalg.norm(v)
        if best is None or n > best[0]:
            best = (n, v)
    return best[1] / best[0]


def eigenpairs(J: np.ndarray):
    """Eigenvalues and unit eigenvectors of a 3x3 matrix.

    Roots of the characteristic polynomial, each polished by one Newton step,
    with eigenvectors taken from the best-conditioned cross product of two
    rows of ``J - lambda I``.  Eigenvalues are sorted by real part.
    """
    J = np.asarray(J, dtype=float)
    a, b, c = _charpoly(J)
    roots = np.roots([1.0, a, b, c]).astype(complex)
    vals, vecs = [], []
    for lam in roots:
        if abs(lam.imag) < 1e-12 * max(1.0, abs(lam)):
            lam = complex(lam.real, 0.0)
        q = ((lam + a) * lam + b) * lam + c
        dq = (3 * lam + 2 * a) * lam + b
        if dq != 0:
            lam = lam - q / dq
        if lam.imag == 0.0 or abs(lam.imag) < 1e-12 * max(1.0, abs(lam)):
            lam = complex(lam.real, 0.0)
            v = _null_vector(J - lam.real * np.eye(3)).astype(complex)
        else:
            v = _null_vector(J.astype(complex) - lam * np.eye(3))
        vals.append(lam)
        vecs.append(v)
    order = sorted(range(3), key=lambda k: (vals[k].real, vals[k].imag))
    return np.array([vals[k] for k in order]), np.column_stack([vecs[k] for k in order])


def equilibria(p: Params) -> dict:
    """The three equilibria keyed by kind: ``origin``, ``p_plus``, ``p_minus``.

    Raises
    ------
    DomainError
        If ``rho <= 1``; the three points merge at the pitchfork.
    """
    if not p.rho > 1:
        raise DomainError(f"three equilibria need rho > 1, got rho={p.rho}")
    q = math.sqrt(p.beta * (p.rho - 1.0))
    origin = np.zeros(3)
    pp = np.array([q, q, p.rho - 1.0])
    out = {}
    for kind, loc in (("origin", origin), ("p_plus", pp)):
        vals, vecs = eigenpairs(jacobian(p, loc))
        out[kind] = Equilibrium(kind, loc, vals, vecs)
    # p_minus is built as the exact mirror image of p_plus so that mirrored
    # computations agree bit for bit
    e = out["p_plus"]
    out["p_minus"] = Equilibrium("p_minus", mirror(e.location), e.eigenvalues.copy(),
                                 mirror(e.eigenvectors.T).T)
    return out


def one_dim_direction(eq: Equilibrium) -> np.ndarray:
    """Real unit eigenvector spanning the one-dimensional invariant manifold.

    For the origin this is the unstable direction, for ``p_plus``/``p_minus``
    the stable one.  Sign convention: positive x-component, ties broken by
    y and then z.
    """
    re = eq.eigenvalues.real
    if eq.kind == "origin":
        idx = np.flatnonzero(re > 0)
    else:
        idx = np.flatnonzero(re < 0)
    if len(idx) != 1:
        raise StructureError(
            f"{eq.kind}: expected exactly one {'unstable' if eq.kind == 'origin' else 'stable'}"
            f" eigenvalue, found {len(idx)} ({eq.eigenvalues})")
    k = idx[0]
    if abs(eq.eigenvalues[k].imag) > 0:
        raise StructureError(f"{eq.kind}: one-dimensional eigenvalue is not real")
    v = np.real(eq.eigenvectors[:, k]).astype(float)
    v = v / np.linalg.norm(v)
    for c in v:
        if c != 0.0:
            if c < 0:
                v = -v
            break
    return v


def one_dim_eigenvalue(eq: Equilibrium) -> float:
    re = eq.eigenvalues.real
    k = int(np.argmax(re)) if eq.kind == "origin" else int(np.argmin(re))
    return float(re[k])


def default_eps(eq: Equilibrium) -> float:
    return 1e-6 * (1.0 + float(np.linalg.norm(eq.location)))


def connecting_sign(eq: Equilibrium) -> int:
    """Side of the stable direction of ``p_plus``/``p_minus`` that can meet the origin.

    At the T-points the heteroclinic orbit arrives from the side facing away
    from the origin, so this is the sign of ``v . location``.  The other side
    runs off to infinity in backward time.
    """
    v = one_dim_direction(eq)
    return 1 if float(v @ eq.location) > 0 else -1


@dataclass
class ManifoldBranch:
    source: Equilibrium
    stability: str
    sign: int
    polyline: Trajectory
    termination: str
    target: str | None = None
    distance: float | None = None
    meta: dict = field(default_factory=dict)

    @property
    def points(self) -> np.ndarray:
        return self.polyline.y

    def to_json(self) -> str:
        extra = {
            "source": self.source.kind,
            "stability": self.stability,
            "sign": "+" if self.sign > 0 else "-",
            "termination": self.termination,
        }
        if self.target is not None:
            extra["target"] = self.target
            extra["distance"] = self.distance
        return self.polyline.to_json(extra)


def manifold_branch(p: Params, eq: Equilibrium, sign: int, eps: float | None = None,
                    horizon: float = 50.0, ts: TrappingSphere | None = None,
                    tol: float = 1e-10, delta_conn: float = 1e-4, extra_events=(),
                    all_equilibria: dict | None = None) -> ManifoldBranch:
    """Integrate one branch of the one-dimensional manifold of ``eq``.

    Unstable branches (the origin) run forward, stable branches (``p_plus``,
    ``p_minus``) backward.  The branch is seeded at
    ``location + sign * eps * direction`` and stops on leaving the trapping
    sphere, on entering a ``delta_conn`` ball about another equilibrium, or at
    the horizon.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    eps = default_eps(eq) if eps is None else float(eps)
    scale = 1.0 + float(np.linalg.norm(eq.location))
    if not (1e-8 * scale * (1 - 1e-12) <= eps <= 1e-4 * scale * (1 + 1e-12)):
        raise ValueError(f"eps={eps} outside [1e-8, 1e-4] * (1 + |location|)")
    eqs = all_equilibria if all_equilibria is not None else equilibria(p)
    ts = ts if ts is not None else default_trapping_sphere(p)
    v = one_dim_direction(eq)
    seed = eq.location + sign * eps * v
    unstable = eq.kind == "origin"
    events = [sphere_exit_event(ts)]
    for kind, other in eqs.items():
        if kind != eq.kind:
            events.append(BallEvent(other.location, delta_conn, name=f"ball:{kind}"))
    events.extend(extra_events)
    tr = integrate(p, seed, abs(horizon) if unstable else -abs(horizon), tol, events)

    target = distance = None
    if tr.termination == "hit-event" and tr.event == "sphere-exit":
        term = "hit-sphere"
    elif tr.termination == "hit-event" and tr.event.startswith("ball:"):
        term = "converged-to-equilibrium"
        target = tr.event.split(":", 1)[1]
        distance = float(np.min(np.linalg.norm(tr.y - eqs[target].location, axis=1)))
    elif tr.termination == "hit-event":
        term = f"hit-event:{tr.event}"
    else:
        term = tr.termination
    return ManifoldBranch(eq, "unstable" if unstable else "stable", sign, tr, term,
                          target, distance, {"eps": eps, "tol": tol, "delta_conn": delta_conn})
