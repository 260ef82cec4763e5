"""Lorenz vector field, adaptive Dormand-Prince integration and event location.

The integrator works on plain Python floats rather than numpy arrays: the
state is three numbers, and per-step array overhead would dominate.  All
arithmetic is written so that the reflection ``(x, y, z) -> (-x, -y, z)``
commutes with every operation bit for bit, which keeps mirrored manifold
branches exact mirror images.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "Params",
    "CLASSICAL",
    "vector_field",
    "jacobian",
    "mirror",
    "Crossing",
    "Trajectory",
    "TrappingSphere",
    "SphereEvent",
    "PlaneEvent",
    "BallEvent",
    "sphere_exit_event",
    "plane_event",
    "ball_entry_event",
    "integrate",
    "default_trapping_sphere",
    "inward_on_sphere",
]


@dataclass(frozen=True)
class Params:
    """Parameters ``(rho, sigma, beta)`` of the Lorenz equations."""

    rho: float
    sigma: float
    beta: float = 8.0 / 3.0

    def __post_init__(self):
        for name in ("rho", "sigma", "beta"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive finite number, got {v!r}")

    def as_dict(self) -> dict:
        return {"rho": self.rho, "sigma": self.sigma, "beta": self.beta}


CLASSICAL = Params(28.0, 10.0, 8.0 / 3.0)


def vector_field(p: Params, s) -> np.ndarray:
    """Evaluate ``(sigma (y - x), rho x - y - x z, x y - beta z)``."""
    x, y, z = (float(c) for c in s)
    return np.array(_rhs(p.sigma, p.rho, p.beta, x, y, z))


def jacobian(p: Params, s) -> np.ndarray:
    x, y, z = (float(c) for c in s)
    return np.array([
        [-p.sigma, p.sigma, 0.0],
        [p.rho - z, -1.0, -x],
        [y, x, -p.beta],
    ])


def mirror(s) -> np.ndarray:
    """The symmetry of the Lorenz equations, ``(x, y, z) -> (-x, -y, z)``."""
    a = np.asarray(s)
    out = a.astype(np.result_type(a.dtype, float), copy=True)
    out[..., 0] = -a[..., 0]
    out[..., 1] = -a[..., 1]
    return out


def _rhs(sg, rho, beta, x, y, z):
    return (sg * (y - x), rho * x - y - x * z, x * y - beta * z)


# Dormand-Prince 5(4) tableau with Shampine's dense output.
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (-71 / 57600, 71 / 16695, -71 / 1920, 17253 / 339200,
                                 -22 / 525, 1 / 40)
_P = (
    (1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432),
    (0.0, 0.0, 0.0, 0.0),
    (0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799),
    (0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072),
    (0.0, 127303824393 / 49829197408, -318862633887 / 49829197408,
     701980252875 / 199316789632),
    (0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844),
    (0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423),
)

# PI step-size controller (Gustafsson), exponents for an order-5 method.
_SAFETY = 0.9
_ALPHA = 0.7 / 5
_BETA = 0.4 / 5
_FAC_MIN, _FAC_MAX = 0.2, 10.0


@dataclass(frozen=True)
class Crossing:
    """A located event.

    ``sign`` is the sign of ``grad(g) . F`` in *forward* time, whatever the
    integration direction; 0 marks a tangential (ambiguous) crossing.
    """

    event: str
    t: float
    state: tuple
    sign: int

    @property
    def ambiguous(self) -> bool:
        return self.sign == 0


@dataclass
class Trajectory:
    t: np.ndarray
    y: np.ndarray
    direction: str
    termination: str
    event: str | None = None
    crossings: list = field(default_factory=list)
    params: Params | None = None
    tol: float | None = None

    @property
    def final(self) -> np.ndarray:
        return self.y[-1]

    def __len__(self):
        return len(self.t)

    def crossings_of(self, name: str) -> list:
        return [c for c in self.crossings if c.event == name]

    def header(self) -> dict:
        head = {"direction": self.direction, "termination": self.termination, "tol": self.tol}
        if self.params is not None:
            head.update(self.params.as_dict())
        if self.event is not None:
            head["event"] = self.event
        return head

    def to_json(self, extra: dict | None = None) -> str:
        """Serialise as ``{"header": {...}, "samples": [{"t", "x", "y", "z"}, ...]}``."""
        head = self.header()
        if extra:
            head.update(extra)
        samples = [{"t": float(t), "x": float(s[0]), "y": float(s[1]), "z": float(s[2])}
                   for t, s in zip(self.t, self.y)]
        return json.dumps({"header": head, "samples": samples})

    @classmethod
    def from_json(cls, text: str) -> "Trajectory":
        doc = json.loads(text)
        head = doc["header"]
        t = np.array([r["t"] for r in doc["samples"]], dtype=float)
        y = np.array([[r["x"], r["y"], r["z"]] for r in doc["samples"]], dtype=float).reshape(-1, 3)
        params = None
        if {"rho", "sigma", "beta"} <= head.keys():
            params = Params(head["rho"], head["sigma"], head["beta"])
        return cls(t=t, y=y, direction=head["direction"], termination=head["termination"],
                   event=head.get("event"), params=params, tol=head.get("tol"))


# --------------------------------------------------------------------------
# events


@dataclass(frozen=True)
class TrappingSphere:
    center: tuple
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")


class _Event:
    name = "event"
    terminal = False
    # +1: fire when g increases along the integration, -1: decreases, 0: both
    direction = 0

    def value(self, x, y, z):
        raise NotImplementedError

    def gradient(self, x, y, z):
        raise NotImplementedError

    def project(self, x, y, z):
        return (x, y, z)


class SphereEvent(_Event):
    """Fires when a trajectory leaves the sphere (in its own time direction)."""

    def __init__(self, sphere: TrappingSphere, name="sphere-exit", terminal=True, direction=1):
        self.sphere = sphere
        self.cx, self.cy, self.cz = (float(c) for c in sphere.center)
        self.r = float(sphere.radius)
        self.name = name
        self.terminal = terminal
        self.direction = direction

    def value(self, x, y, z):
        return math.sqrt((x - self.cx) ** 2 + (y - self.cy) ** 2 + (z - self.cz) ** 2) - self.r

    def gradient(self, x, y, z):
        dx, dy, dz = x - self.cx, y - self.cy, z - self.cz
        n = math.sqrt(dx * dx + dy * dy + dz * dz)
        return (dx / n, dy / n, dz / n)

    def project(self, x, y, z):
        dx, dy, dz = x - self.cx, y - self.cy, z - self.cz
        k = self.r / math.sqrt(dx * dx + dy * dy + dz * dz)
        return (self.cx + k * dx, self.cy + k * dy, self.cz + k * dz)


class BallEvent(SphereEvent):
    """Fires on entry into a small ball (connection detection)."""

    def __init__(self, center, radius, name="ball", terminal=True):
        super().__init__(TrappingSphere(tuple(float(c) for c in center), float(radius)),
                         name=name, terminal=terminal, direction=-1)


class PlaneEvent(_Event):
    def __init__(self, normal, offset, name="plane", terminal=False, direction=0):
        n = tuple(float(c) for c in normal)
        nn = n[0] ** 2 + n[1] ** 2 + n[2] ** 2
        if nn == 0.0:
            raise ValueError("plane normal must be nonzero")
        self.normal = n
        self._nn = nn
        self.offset = float(offset)
        self.name = name
        self.terminal = terminal
        self.direction = direction

    def value(self, x, y, z):
        a, b, c = self.normal
        return a * x + b * y + c * z - self.offset

    def gradient(self, x, y, z):
        return self.normal

    def project(self, x, y, z):
        a, b, c = self.normal
        k = (a * x + b * y + c * z - self.offset) / self._nn
        return (x - k * a, y - k * b, z - k * c)


def sphere_exit_event(ts: TrappingSphere, name="sphere-exit") -> SphereEvent:
    return SphereEvent(ts, name=name)


def plane_event(normal, offset, name="plane", terminal=False, direction=0) -> PlaneEvent:
    return PlaneEvent(normal, offset, name=name, terminal=terminal, direction=direction)


def ball_entry_event(center, radius, name="ball") -> BallEvent:
    return BallEvent(center, radius, name=name)


# --------------------------------------------------------------------------
# integration


def _initial_step(sg, rho, beta, y0, f0, direction, tol):
    # Hairer, Norsett & Wanner, Solving ODEs I, II.4
    sc = [tol * (1.0 + abs(v)) for v in y0]
    d0 = math.sqrt(sum((a / s) ** 2 for a, s in zip(y0, sc)) / 3)
    d1 = math.sqrt(sum((a / s) ** 2 for a, s in zip(f0, sc)) / 3)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = [a + direction * h0 * b for a, b in zip(y0, f0)]
    f1 = _rhs(sg, rho, beta, *y1)
    d2 = math.sqrt(sum(((a - b) / s) ** 2 for a, b, s in zip(f1, f0, sc)) / 3) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1)


def _dense(y0, h, Q, theta):
    t1, t2, t3, t4 = theta, theta * theta, theta ** 3, theta ** 4
    return tuple(y0[i] + h * (Q[i][0] * t1 + Q[i][1] * t2 + Q[i][2] * t3 + Q[i][3] * t4)
                 for i in range(3))


def _locate(ev, y0, h, Q, g0, g1):
    """Bisection for the sign change of ``ev`` on the dense output of one step."""
    lo, hi = 0.0, 1.0
    glo = g0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        gm = ev.value(*_dense(y0, h, Q, mid))
        if (gm > 0) == (glo > 0) and gm != 0.0:
            lo, glo = mid, gm
        else:
            hi = mid
    return hi


def integrate(p: Params, s0, horizon: float, tol: float = 1e-10, events: Sequence = (),
              max_steps: int = 2_000_000, h_init: float | None = None) -> Trajectory:
    """Integrate the Lorenz equations with an adaptive Dormand-Prince 5(4) pair.

    Parameters
    ----------
    p : Params
    s0 : sequence of 3 floats
        Initial state.
    horizon : float
        Signed integration time; negative values integrate backward.
    tol : float
        Local error tolerance, used as both absolute and relative tolerance.
    events : sequence of event objects
        Terminal events stop the integration at the located crossing;
        non-terminal ones are recorded in ``Trajectory.crossings``.

    Returns
    -------
    Trajectory
        One sample per accepted step.  ``termination`` is one of
        ``reached-horizon``, ``hit-event`` (see ``event``) or ``step-failure``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if horizon == 0 or not math.isfinite(horizon):
        raise ValueError("horizon must be finite and nonzero")
    sg, rho, beta = float(p.sigma), float(p.rho), float(p.beta)
    dirn = 1.0 if horizon > 0 else -1.0
    t_end = float(horizon)
    y = tuple(float(c) for c in s0)
    if not all(math.isfinite(c) for c in y):
        raise ValueError("initial state must be finite")
    f = _rhs(sg, rho, beta, *y)
    ts, ys = [0.0], [y]
    crossings = []
    gvals = [ev.value(*y) for ev in events]
    result = dict(termination="reached-horizon", event=None)

    if f == (0.0, 0.0, 0.0):
        # exact equilibrium: the solution is constant
        ts.append(t_end)
        ys.append(y)
        return _finish(ts, ys, dirn, result, crossings, p, tol)

    h = h_init if h_init is not None else _initial_step(sg, rho, beta, y, f, dirn, tol)
    t = 0.0
    err_old = 1e-4
    rejected = False
    for _ in range(max_steps):
        remaining = (t_end - t) * dirn
        if remaining <= 0:
            break
        if h >= remaining:
            h = remaining
        h_min = 1e-14 * max(1.0, abs(t))
        if h < h_min:
            result["termination"] = "step-failure"
            break
        hs = dirn * h
        x0, y0_, z0 = y
        k1 = f
        a = _rhs(sg, rho, beta,
                 x0 + hs * _A21 * k1[0], y0_ + hs * _A21 * k1[1], z0 + hs * _A21 * k1[2])
        k2 = a
        k3 = _rhs(sg, rho, beta,
                  x0 + hs * (_A31 * k1[0] + _A32 * k2[0]),
                  y0_ + hs * (_A31 * k1[1] + _A32 * k2[1]),
                  z0 + hs * (_A31 * k1[2] + _A32 * k2[2]))
        k4 = _rhs(sg, rho, beta,
                  x0 + hs * (_A41 * k1[0] + _A42 * k2[0] + _A43 * k3[0]),
                  y0_ + hs * (_A41 * k1[1] + _A42 * k2[1] + _A43 * k3[1]),
                  z0 + hs * (_A41 * k1[2] + _A42 * k2[2] + _A43 * k3[2]))
        k5 = _rhs(sg, rho, beta,
                  x0 + hs * (_A51 * k1[0] + _A52 * k2[0] + _A53 * k3[0] + _A54 * k4[0]),
                  y0_ + hs * (_A51 * k1[1] + _A52 * k2[1] + _A53 * k3[1] + _A54 * k4[1]),
                  z0 + hs * (_A51 * k1[2] + _A52 * k2[2] + _A53 * k3[2] + _A54 * k4[2]))
        k6 = _rhs(sg, rho, beta,
                  x0 + hs * (_A61 * k1[0] + _A62 * k2[0] + _A63 * k3[0] + _A64 * k4[0]
                             + _A65 * k5[0]),
                  y0_ + hs * (_A61 * k1[1] + _A62 * k2[1] + _A63 * k3[1] + _A64 * k4[1]
                              + _A65 * k5[1]),
                  z0 + hs * (_A61 * k1[2] + _A62 * k2[2] + _A63 * k3[2] + _A64 * k4[2]
                             + _A65 * k5[2]))
        yn = tuple(y[i] + hs * (_B1 * k1[i] + _B3 * k3[i] + _B4 * k4[i] + _B5 * k5[i]
                                + _B6 * k6[i]) for i in range(3))
        if not all(math.isfinite(c) for c in yn):
            h *= 0.25
            rejected = True
            continue
        k7 = _rhs(sg, rho, beta, *yn)
        acc = 0.0
        for i in range(3):
            e = hs * (_E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i] + _E5 * k5[i] + _E6 * k6[i]
                      + _E7 * k7[i])
            sc = tol * (1.0 + max(abs(y[i]), abs(yn[i])))
            acc += (e / sc) ** 2
        err = math.sqrt(acc / 3)

        if err > 1.0:
            fac = max(_FAC_MIN, _SAFETY * err ** (-1 / 5))
            h *= fac
            rejected = True
            continue

        # accepted step
        t_new = t_end if h == remaining else t + hs
        stop = None
        if events:
            K = (k1, k2, k3, k4, k5, k6, k7)
            Q = [[sum(K[j][i] * _P[j][c] for j in range(7)) for c in range(4)] for i in range(3)]
            found = []
            for idx, ev in enumerate(events):
                g0, g1 = gvals[idx], ev.value(*yn)
                if g0 != 0.0 and (g1 == 0.0 or (g0 > 0) != (g1 > 0)):
                    rising = g1 > g0
                    if ev.direction == 0 or (ev.direction > 0) == rising:
                        theta = 1.0 if g1 == 0.0 else _locate(ev, y, hs, Q, g0, g1)
                        found.append((theta, idx, ev))
                gvals[idx] = -g0 if g1 == 0.0 else g1
            found.sort(key=lambda item: (item[0], item[1]))
            for theta, idx, ev in found:
                sx = ev.project(*_dense(y, hs, Q, theta))
                tc = t + theta * hs
                gr = ev.gradient(*sx)
                fv = _rhs(sg, rho, beta, *sx)
                dot = gr[0] * fv[0] + gr[1] * fv[1] + gr[2] * fv[2]
                scale = math.sqrt(gr[0] ** 2 + gr[1] ** 2 + gr[2] ** 2) * math.sqrt(
                    fv[0] ** 2 + fv[1] ** 2 + fv[2] ** 2)
                sign = 0 if abs(dot) <= 1e-9 * scale else (1 if dot > 0 else -1)
                crossings.append(Crossing(ev.name, tc, sx, sign))
                if ev.terminal:
                    stop = (tc, sx, ev.name)
                    break
        if stop is not None:
            ts.append(stop[0])
            ys.append(stop[1])
            result["termination"] = "hit-event"
            result["event"] = stop[2]
            break
        t = t_new
        y = yn
        f = k7
        ts.append(t)
        ys.append(y)

        err = max(err, 1e-10)
        fac = _SAFETY * err ** (-_ALPHA) * err_old ** _BETA
        fac = min(_FAC_MAX, max(_FAC_MIN, fac))
        if rejected:
            fac = min(1.0, fac)
        h *= fac
        err_old = err
        rejected = False
    else:
        result["termination"] = "step-failure"

    return _finish(ts, ys, dirn, result, crossings, p, tol)


def _finish(ts, ys, dirn, result, crossings, p, tol):
    return Trajectory(
        t=np.array(ts, dtype=float),
        y=np.array(ys, dtype=float).reshape(-1, 3),
        direction="forward" if dirn > 0 else "backward",
        termination=result["termination"],
        event=result["event"],
        crossings=crossings,
        params=p,
        tol=tol,
    )


# --------------------------------------------------------------------------
# trapping sphere


def _fibonacci_sphere(n: int) -> np.ndarray:
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    r = np.sqrt(1.0 - z * z)
    phi = math.pi * (3.0 - math.sqrt(5.0)) * i
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def inward_on_sphere(p: Params, ts: TrappingSphere, n_samples: int = 10_000) -> float:
    """Largest radial component of the field over a Fibonacci lattice on ``ts``.

    Negative means the flow enters the ball at every sample.
    """
    u = _fibonacci_sphere(n_samples)
    c = np.asarray(ts.center, dtype=float)
    pts = c + ts.radius * u
    x, y, z = pts.T
    F = np.column_stack([p.sigma * (y - x), p.rho * x - y - x * z, x * y - p.beta * z])
    return float(np.max(np.sum(F * u, axis=1)))


def default_trapping_sphere(p: Params, initial_radius: float | None = None,
                            n_samples: int = 10_000) -> TrappingSphere:
    """Sphere about ``(0, 0, rho + sigma)``; radius doubled until the flow points inward."""
    center = (0.0, 0.0, p.rho + p.sigma)
    r = float(initial_radius) if initial_radius else p.rho + p.sigma
    for _ in range(60):
        ts = TrappingSphere(center, r)
        if inward_on_sphere(p, ts, n_samples) < 0:
            return ts
        r *= 2.0
    raise RuntimeError("no trapping sphere found")
