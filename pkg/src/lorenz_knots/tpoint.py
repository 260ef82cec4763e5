"""Heteroclinic miss distance and T-point location in the (rho, sigma) plane.

The matching section is the plane ``z = rho - 1`` through ``p_plus`` and
``p_minus``.  The origin's unstable branch is followed forward to its first
upward crossing of the plane; the side of the partner's stable manifold that
faces away from the origin is followed backward to its first crossing with the
same forward-time orientation.  The two in-plane offsets between the crossing
points vanish exactly when the heteroclinic connection exists.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, LorenzKnotError, NoConvergence, StructureError
from .manifolds import (
    connecting_sign,
    equilibria,
    manifold_branch,
)
from .ode import Params, TrappingSphere, default_trapping_sphere, mirror, plane_event

__all__ = [
    "MissConfig",
    "MissDistance",
    "TPoint",
    "miss_distance",
    "section_offset",
    "find_tpoint",
    "sweep",
    "sweep_csv",
]

PARTNERS = ("p_plus", "p_minus")


@dataclass(frozen=True)
class MissConfig:
    tol: float = 1e-10
    eps_rel: float = 1e-6
    horizon: float = 50.0
    partner: str = "auto"
    sphere_radius: float | None = None

    def sphere(self, p: Params) -> TrappingSphere:
        if self.sphere_radius:
            return TrappingSphere((0.0, 0.0, p.rho + p.sigma), float(self.sphere_radius))
        return default_trapping_sphere(p)


@dataclass
class MissDistance:
    d_plus: float
    d_minus: float
    witness_plus: tuple | None = None
    witness_minus: tuple | None = None
    partner: str | None = None
    residual: tuple | None = None
    status: str = "ok"

    @property
    def defined(self) -> bool:
        return self.status == "ok"


@dataclass
class TPoint:
    params: Params
    residual: float
    partner: str
    iterations: int = 0
    trace: list = field(default_factory=list)
    knot_hint: str | None = None

    def to_dict(self) -> dict:
        out = {"rho": self.params.rho, "sigma": self.params.sigma, "beta": self.params.beta,
               "residual": self.residual, "partner": self.partner,
               "iterations": self.iterations}
        if self.knot_hint:
            out["knot_hint"] = self.knot_hint
        return out


def _mirror_kind(kind):
    return {"p_plus": "p_minus", "p_minus": "p_plus", "origin": "origin"}[kind]


def _section_crossing(branch):
    hits = branch.polyline.crossings_of("section")
    if branch.termination == "hit-event:section" and hits:
        return np.array(hits[-1].state)
    return None


def _one_side(p, eqs, ts, cfg, origin_sign, partner):
    """Section offset for the origin branch with sign ``origin_sign``."""
    origin = eqs["origin"]
    eps_o = cfg.eps_rel * (1.0 + float(np.linalg.norm(origin.location)))
    sec_up = plane_event((0.0, 0.0, 1.0), p.rho - 1.0, name="section", terminal=True,
                         direction=1)
    ub = manifold_branch(p, origin, origin_sign, eps=eps_o, horizon=cfg.horizon, ts=ts,
                         tol=cfg.tol, extra_events=[sec_up], all_equilibria=eqs)
    U = _section_crossing(ub)
    target = eqs[partner]
    eps_t = cfg.eps_rel * (1.0 + float(np.linalg.norm(target.location)))
    # backward in time an upward (forward-time) crossing makes z decrease
    sec_down = plane_event((0.0, 0.0, 1.0), p.rho - 1.0, name="section", terminal=True,
                           direction=-1)
    sb = manifold_branch(p, target, connecting_sign(target), eps=eps_t, horizon=cfg.horizon,
                         ts=ts, tol=cfg.tol, extra_events=[sec_down], all_equilibria=eqs)
    S = _section_crossing(sb)
    return U, S


def section_offset(p: Params, partner: str, cfg: MissConfig = MissConfig(),
                   ts: TrappingSphere | None = None):
    """In-plane offset ``(dx, dy)`` between the (+) unstable branch and ``partner``.

    Returns ``(offset, witness)``; ``offset`` is None when either branch fails
    to reach the section.
    """
    eqs = equilibria(p)
    ts = ts if ts is not None else cfg.sphere(p)
    U, S = _one_side(p, eqs, ts, cfg, 1, partner)
    if U is None or S is None:
        return None, U
    return np.array([U[0] - S[0], U[1] - S[1]]), U


def miss_distance(p: Params, cfg: MissConfig = MissConfig()) -> MissDistance:
    """Distance by which the origin's unstable branches miss the partner stable branches.

    ``d_plus`` uses the origin's (+) branch, ``d_minus`` the (-) branch and the
    mirror-image partner; the two sides are integrated independently.  With
    ``cfg.partner == "auto"`` the partner equilibrium giving the smaller miss
    is used.  Failures to reach the section are reported in ``status``
    (``undefined-distance``, or ``structure-error`` below the Hopf point),
    not raised.
    """
    eqs = equilibria(p)
    ts = cfg.sphere(p)
    partners = PARTNERS if cfg.partner == "auto" else (cfg.partner,)
    best = None
    for partner in partners:
        try:
            Up, Sp = _one_side(p, eqs, ts, cfg, 1, partner)
        except StructureError:
            # no one-dimensional stable manifold at p_plus/p_minus
            return MissDistance(math.nan, math.nan, status="structure-error")
        if Up is None or Sp is None:
            continue
        d = math.hypot(Up[0] - Sp[0], Up[1] - Sp[1])
        if best is None or d < best[0]:
            best = (d, partner, Up, Sp)
    if best is None:
        return MissDistance(math.nan, math.nan, status="undefined-distance")
    d_plus, partner, Up, Sp = best
    Um, Sm = _one_side(p, eqs, ts, cfg, -1, _mirror_kind(partner))
    if Um is None or Sm is None:
        return MissDistance(d_plus, math.nan, tuple(Up), None, partner,
                            status="undefined-distance")
    d_minus = math.hypot(Um[0] - Sm[0], Um[1] - Sm[1])
    return MissDistance(d_plus, d_minus, tuple(float(c) for c in Up),
                        tuple(float(c) for c in Um), partner,
                        (float(Up[0] - Sp[0]), float(Up[1] - Sp[1])))


# --------------------------------------------------------------------------
# root finding


def find_tpoint(guess: Params, tol_tp: float = 1e-8, cfg: MissConfig = MissConfig(),
                max_iter: int = 50, fd_rel: float = 1e-5, beta: float | None = None) -> TPoint:
    """Solve for a T-point near ``guess`` with beta held fixed.

    The unknowns are ``(rho, sigma)`` and the equations are the two in-plane
    section offsets.  Broyden updates start from a forward-difference Jacobian
    (relative step ``fd_rel``); each step is damped until the residual norm
    decreases, and the Jacobian is re-differenced when damping fails.

    Raises
    ------
    NoConvergence
        After ``max_iter`` accepted steps, or when no decreasing step exists.
    DomainError
        When an iterate leaves ``rho > 1``.
    """
    if beta is not None:
        guess = replace(guess, beta=float(beta))
    b = guess.beta
    if cfg.partner == "auto":
        md = miss_distance(guess, replace(cfg, partner="auto"))
        if not md.defined:
            raise NoConvergence(f"miss distance undefined at guess {guess}")
        cfg = replace(cfg, partner=md.partner)
    partner = cfg.partner

    def F(x):
        if not x[0] > 1 or not x[1] > 0:
            raise DomainError(f"iterate left the domain: rho={x[0]}, sigma={x[1]}")
        off, _ = section_offset(Params(float(x[0]), float(x[1]), b), partner, cfg)
        return off

    def fd_jacobian(x, fx):
        J = np.empty((2, 2))
        for j in range(2):
            h = fd_rel * abs(x[j])
            xp = x.copy()
            xp[j] += h
            fp = F(xp)
            if fp is None:
                xp[j] = x[j] - h
                fp = F(xp)
                if fp is None:
                    raise NoConvergence("section not reached during differencing")
                J[:, j] = (fx - fp) / h
            else:
                J[:, j] = (fp - fx) / h
        return J

    x = np.array([guess.rho, guess.sigma], dtype=float)
    fx = F(x)
    if fx is None:
        raise NoConvergence(f"section not reached at guess {guess}")
    r = float(np.linalg.norm(fx))
    trace = [r]
    it = 0
    J = None
    while r >= tol_tp:
        if it >= max_iter:
            raise NoConvergence(f"no convergence after {max_iter} iterations (residual {r:.3e})")
        if J is None:
            J = fd_jacobian(x, fx)
        fresh = True
        accepted = False
        for attempt in range(2):
            try:
                dx = -np.linalg.solve(J, fx)
            except np.linalg.LinAlgError:
                dx = -np.linalg.lstsq(J, fx, rcond=None)[0]
            lam = 1.0
            for _ in range(12):
                xn = x + lam * dx
                try:
                    fn = F(xn)
                except DomainError:
                    fn = None
                if fn is not None and np.linalg.norm(fn) < r:
                    accepted = True
                    break
                lam *= 0.5
            if accepted:
                break
            if fresh and attempt == 0 and it > 0:
                J = fd_jacobian(x, fx)
                continue
            break
        if not accepted:
            raise NoConvergence(f"no decreasing step at rho={x[0]:.10g}, sigma={x[1]:.10g} "
                                f"(residual {r:.3e})")
        s = xn - x
        y = fn - fx
        J = J + np.outer(y - J @ s, s) / float(s @ s)
        x, fx = xn, fn
        r = float(np.linalg.norm(fx))
        trace.append(r)
        it += 1
    return TPoint(Params(float(x[0]), float(x[1]), b), r, partner, it, trace)


# --------------------------------------------------------------------------
# sweep


def _sweep_cell(args):
    rho, sigma, beta, cfg = args
    try:
        p = Params(rho, sigma, beta)
        md = miss_distance(p, cfg)
        status = md.status
        return (rho, sigma, beta, md.d_plus, md.d_minus, status)
    except DomainError:
        return (rho, sigma, beta, math.nan, math.nan, "domain-error")
    except (LorenzKnotError, ValueError, ArithmeticError) as exc:
        return (rho, sigma, beta, math.nan, math.nan, f"error:{type(exc).__name__}")


def sweep(rho_range, sigma_range, resolution, beta: float = 8.0 / 3.0,
          cfg: MissConfig = MissConfig(), jobs: int = 1) -> list:
    """Evaluate the miss distance on a grid, rows in row-major (rho-major) order.

    ``resolution`` is an int or a pair ``(n_rho, n_sigma)``, each at least 2.
    Cell failures are recorded in the ``status`` column and never abort the
    sweep.  The output does not depend on ``jobs``.
    """
    if isinstance(resolution, int):
        resolution = (resolution, resolution)
    n_rho, n_sigma = resolution
    if n_rho < 2 or n_sigma < 2:
        raise ValueError("resolution must be at least 2 per axis")
    rhos = np.linspace(rho_range[0], rho_range[1], n_rho)
    sigmas = np.linspace(sigma_range[0], sigma_range[1], n_sigma)
    cells = [(float(r), float(s), float(beta), cfg) for r in rhos for s in sigmas]
    if jobs <= 1:
        return [_sweep_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_sweep_cell, cells, chunksize=max(1, len(cells) // (4 * jobs))))


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rho", "sigma", "beta", "d_plus", "d_minus", "status"])
    for rho, sigma, beta, dp, dm, status in rows:
        w.writerow([repr(rho), repr(sigma), repr(beta), repr(dp), repr(dm), status])
    return buf.getvalue()
