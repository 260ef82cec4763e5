import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from lorenz_knots.ode import (
    CLASSICAL,
    Params,
    Trajectory,
    TrappingSphere,
    default_trapping_sphere,
    integrate,
    inward_on_sphere,
    jacobian,
    mirror,
    plane_event,
    sphere_exit_event,
    vector_field,
)

finite = st.floats(-50, 50, allow_nan=False)
positive = st.floats(0.1, 200, allow_nan=False)


def reference(p, s0, T, rtol=1e-13):
    def f(t, s):
        return vector_field(p, s)

    sol = solve_ivp(f, (0.0, T), s0, method="DOP853", rtol=rtol, atol=rtol, dense_output=True)
    return sol


def test_vector_field_value():
    assert np.allclose(vector_field(CLASSICAL, [1.0, 2.0, 3.0]),
                       [10.0 * (2 - 1), 28 * 1 - 2 - 1 * 3, 1 * 2 - 8.0 / 3.0 * 3])


def test_params_validation():
    with pytest.raises(ValueError):
        Params(-1.0, 10.0)
    with pytest.raises(ValueError):
        Params(28.0, float("nan"))


@given(st.tuples(finite, finite, finite), positive, positive, positive)
def test_mirror_equivariance(s, rho, sigma, beta):
    p = Params(rho, sigma, beta)
    lhs = vector_field(p, mirror(np.array(s)))
    rhs = mirror(vector_field(p, np.array(s)))
    assert np.array_equal(lhs, rhs)


@given(st.tuples(finite, finite, finite))
def test_jacobian_matches_finite_differences(s):
    s = np.array(s)
    J = jacobian(CLASSICAL, s)
    h = 1e-6
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        col = (vector_field(CLASSICAL, s + e) - vector_field(CLASSICAL, s - e)) / (2 * h)
        assert np.allclose(J[:, k], col, atol=1e-5)


def test_agrees_with_independent_integrator():
    tr = integrate(CLASSICAL, [1.0, 1.0, 1.0], 10.0, tol=1e-10)
    ref = reference(CLASSICAL, [1.0, 1.0, 1.0], 10.0)
    assert tr.termination == "reached-horizon"
    assert tr.t[-1] == 10.0
    assert np.max(np.abs(tr.final - ref.y[:, -1])) < 1e-6
    # interior samples too
    err = np.max(np.abs(tr.y - ref.sol(tr.t).T))
    assert err < 1e-6


def test_error_decreases_with_tolerance():
    ref = reference(CLASSICAL, [1.0, 1.0, 1.0], 2.0).y[:, -1]
    errs = [np.linalg.norm(integrate(CLASSICAL, [1.0, 1.0, 1.0], 2.0, tol=tol).final - ref)
            for tol in (1e-6, 1e-8, 1e-10)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-8


def test_backward_retraces_forward():
    s0 = np.array([1.0, -2.0, 20.0])
    fwd = integrate(CLASSICAL, s0, 0.2, tol=1e-12)
    back = integrate(CLASSICAL, fwd.final, -0.2, tol=1e-12)
    assert back.direction == "backward"
    assert np.max(np.abs(back.final - s0)) < 1e-9


def test_equilibrium_stays_put():
    q = math.sqrt(8.0 / 3.0 * 27.0)
    tr = integrate(CLASSICAL, [q, q, 27.0], 5.0)
    assert np.allclose(tr.y, [q, q, 27.0], atol=1e-9)


def test_mirror_trajectory_is_exact_mirror():
    s0 = np.array([0.3, 1.1, 5.0])
    a = integrate(CLASSICAL, s0, 3.0)
    b = integrate(CLASSICAL, mirror(s0), 3.0)
    assert np.array_equal(a.t, b.t)
    assert np.array_equal(mirror(a.y), b.y)


def test_plane_event_located_on_surface():
    ev = plane_event((0.0, 0.0, 1.0), 27.0, name="section", terminal=True, direction=1)
    tr = integrate(CLASSICAL, [1.0, 1.0, 1.0], 20.0, events=[ev])
    assert tr.termination == "hit-event" and tr.event == "section"
    assert abs(tr.final[2] - 27.0) < 1e-12
    c = tr.crossings_of("section")[-1]
    assert c.sign == 1
    # time of the event agrees with the dense reference solution
    ref = reference(CLASSICAL, [1.0, 1.0, 1.0], c.t + 0.01)
    assert abs(ref.sol(c.t)[2] - 27.0) < 1e-6


def test_nonterminal_events_are_recorded():
    ev = plane_event((1.0, 0.0, 0.0), 0.0, name="x0")
    tr = integrate(CLASSICAL, [1.0, 1.0, 1.0], 20.0, events=[ev])
    assert tr.termination == "reached-horizon"
    hits = tr.crossings_of("x0")
    assert len(hits) > 2
    assert all(abs(h.state[0]) < 1e-10 for h in hits)
    assert {h.sign for h in hits} <= {-1, 0, 1}


def test_sphere_exit_event():
    ts = TrappingSphere((0.0, 0.0, 0.0), 5.0)
    tr = integrate(CLASSICAL, [1.0, 1.0, 1.0], 10.0, events=[sphere_exit_event(ts)])
    assert tr.termination == "hit-event" and tr.event == "sphere-exit"
    assert abs(np.linalg.norm(tr.final) - 5.0) < 1e-12


def test_default_trapping_sphere_classical():
    ts = default_trapping_sphere(CLASSICAL)
    assert ts.center == (0.0, 0.0, 38.0)
    assert ts.radius == 76.0
    assert inward_on_sphere(CLASSICAL, ts) < 0
    assert inward_on_sphere(CLASSICAL, TrappingSphere(ts.center, 38.0)) > 0


def test_trajectory_json_roundtrip():
    tr = integrate(CLASSICAL, [1.0, 1.0, 1.0], 0.5)
    doc = json.loads(tr.to_json())
    assert set(doc) == {"header", "samples"}
    assert set(doc["samples"][0]) == {"t", "x", "y", "z"}
    back = Trajectory.from_json(tr.to_json())
    assert np.array_equal(back.t, tr.t)
    assert np.array_equal(back.y, tr.y)
    assert back.params == tr.params
    assert back.termination == tr.termination


def test_step_budget_exhaustion_is_step_failure():
    # backward in time the flow blows up; the step budget runs out first
    tr = integrate(CLASSICAL, [10.0, 10.0, 10.0], -10.0, max_steps=2000)
    assert tr.termination == "step-failure"
    assert np.all(np.isfinite(tr.y))
