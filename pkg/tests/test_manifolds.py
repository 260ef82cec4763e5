import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lorenz_knots.errors import DomainError, StructureError
from lorenz_knots.manifolds import (
    connecting_sign,
    eigenpairs,
    equilibria,
    manifold_branch,
    one_dim_direction,
    one_dim_eigenvalue,
)
from lorenz_knots.ode import CLASSICAL, Params, jacobian, mirror, vector_field


def test_equilibrium_locations_classical():
    eqs = equilibria(CLASSICAL)
    q = math.sqrt(8.0 / 3.0 * 27.0)
    assert np.array_equal(eqs["origin"].location, [0.0, 0.0, 0.0])
    assert np.allclose(eqs["p_plus"].location, [q, q, 27.0], rtol=0, atol=1e-14)
    assert np.array_equal(eqs["p_minus"].location, mirror(eqs["p_plus"].location))
    for eq in eqs.values():
        assert np.allclose(vector_field(CLASSICAL, eq.location), 0.0, atol=1e-12)


@pytest.mark.parametrize("rho", [1.0, 0.5])
def test_domain_error_at_or_below_pitchfork(rho):
    with pytest.raises(DomainError):
        equilibria(Params(rho, 10.0))


@given(st.floats(1.5, 300), st.floats(0.5, 30), st.floats(0.3, 6))
@settings(max_examples=60, deadline=None)
def test_eigenpairs_match_numpy(rho, sigma, beta):
    p = Params(rho, sigma, beta)
    for kind, eq in equilibria(p).items():
        J = jacobian(p, eq.location)
        ref = np.sort_complex(np.linalg.eigvals(J))
        got = np.sort_complex(eq.eigenvalues)
        assert np.allclose(got, ref, rtol=1e-9, atol=1e-9)
        for k in range(3):
            v = eq.eigenvectors[:, k]
            assert np.linalg.norm(J @ v - eq.eigenvalues[k] * v) < 1e-8 * (1 + abs(eq.eigenvalues[k]))


def test_eigenpairs_sorted_by_real_part():
    vals, _ = eigenpairs(np.diag([3.0, -1.0, 2.0]))
    assert list(vals.real) == [-1.0, 2.0, 3.0]


def test_saddle_structure_classical():
    eqs = equilibria(CLASSICAL)
    assert one_dim_eigenvalue(eqs["origin"]) > 0
    assert one_dim_eigenvalue(eqs["p_plus"]) < 0
    v = one_dim_direction(eqs["origin"])
    assert v[0] > 0 and abs(np.linalg.norm(v) - 1) < 1e-14
    # unstable direction of the origin lies in the (x, y) plane
    assert abs(v[2]) < 1e-14


def test_structure_error_below_hopf():
    eqs = equilibria(Params(20.0, 10.0))
    with pytest.raises(StructureError):
        one_dim_direction(eqs["p_plus"])


def test_connecting_sign_points_away_from_origin():
    eqs = equilibria(CLASSICAL)
    for kind in ("p_plus", "p_minus"):
        eq = eqs[kind]
        v = connecting_sign(eq) * one_dim_direction(eq)
        assert v @ eq.location > 0


def test_eps_range_enforced():
    eqs = equilibria(CLASSICAL)
    with pytest.raises(ValueError):
        manifold_branch(CLASSICAL, eqs["origin"], 1, eps=1e-2)
    with pytest.raises(ValueError):
        manifold_branch(CLASSICAL, eqs["origin"], 1, eps=1e-12)
    with pytest.raises(ValueError):
        manifold_branch(CLASSICAL, eqs["origin"], 0)


@given(st.floats(2.0, 200.0), st.floats(1.0, 20.0))
@settings(max_examples=15, deadline=None)
def test_unstable_branches_are_exact_mirror_images(rho, sigma):
    p = Params(rho, sigma)
    eqs = equilibria(p)
    a = manifold_branch(p, eqs["origin"], 1, horizon=5.0, all_equilibria=eqs)
    b = manifold_branch(p, eqs["origin"], -1, horizon=5.0, all_equilibria=eqs)
    assert np.array_equal(mirror(a.points), b.points)
    assert a.termination == b.termination


def test_stable_branches_are_mirror_images():
    # the positive-x sign convention flips under the mirror
    eqs = equilibria(CLASSICAL)
    for sgn in (1, -1):
        a = manifold_branch(CLASSICAL, eqs["p_plus"], sgn, horizon=5.0, all_equilibria=eqs)
        b = manifold_branch(CLASSICAL, eqs["p_minus"], -sgn, horizon=5.0, all_equilibria=eqs)
        assert np.array_equal(mirror(a.points), b.points)


def test_branch_seed_and_direction():
    eqs = equilibria(CLASSICAL)
    br = manifold_branch(CLASSICAL, eqs["p_plus"], connecting_sign(eqs["p_plus"]), horizon=1.0)
    assert br.stability == "stable"
    assert br.polyline.direction == "backward"
    d = np.linalg.norm(br.points[0] - eqs["p_plus"].location)
    assert abs(d - 1e-6 * (1 + np.linalg.norm(eqs["p_plus"].location))) < 1e-15


def test_outer_stable_half_leaves_the_sphere():
    eqs = equilibria(CLASSICAL)
    eq = eqs["p_plus"]
    br = manifold_branch(CLASSICAL, eq, -connecting_sign(eq), all_equilibria=eqs)
    assert br.termination == "hit-sphere"


def test_classical_unstable_branch_does_not_connect():
    eqs = equilibria(CLASSICAL)
    br = manifold_branch(CLASSICAL, eqs["origin"], 1, horizon=30.0, all_equilibria=eqs)
    assert br.termination == "reached-horizon"
    assert br.target is None


def test_branch_json_header():
    import json

    eqs = equilibria(CLASSICAL)
    br = manifold_branch(CLASSICAL, eqs["origin"], -1, horizon=1.0)
    head = json.loads(br.to_json())["header"]
    assert head["source"] == "origin" and head["sign"] == "-"
    assert head["termination"] == "reached-horizon"
