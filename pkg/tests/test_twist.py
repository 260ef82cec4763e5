import random

import pytest

from lorenz_knots.knots import (
    LaurentPolynomial,
    alexander_polynomial,
    classify,
    figure_eight_diagram,
    trefoil_diagram,
    twist_knot_diagram,
)
from lorenz_knots.knots.twist import twist_table


def closed_form(n):
    """Twist knot Alexander polynomial: k t - (2k -+ 1) + k/t for n = 2k - 1 or n = 2k."""
    t = LaurentPolynomial.variable()
    if n == 0:
        return LaurentPolynomial.constant(1)
    k = (n + 1) // 2
    if n % 2:
        return k * t - (2 * k - 1) + k * t ** -1
    k = n // 2
    return k * t - (2 * k + 1) + k * t ** -1


@pytest.mark.parametrize("n", range(0, 13))
def test_table_matches_closed_form(n):
    d = twist_knot_diagram(n)
    assert d.n_crossings == (n + 2 if n else 0)
    assert alexander_polynomial(d) == closed_form(n).normalized()
    assert abs(closed_form(n)(-1)) == 2 * n + 1


def test_named_entries():
    names = [str(classify(alexander_polynomial(twist_knot_diagram(n)))) for n in range(9)]
    assert names == ["unknot", "3_1", "4_1", "5_2", "6_1", "7_2", "8_1", "twist(7)", "twist(8)"]
    assert str(classify(alexander_polynomial(trefoil_diagram()))) == "3_1"
    assert str(classify(alexander_polynomial(figure_eight_diagram()))) == "4_1"
    assert len(twist_table()) == 13


def test_classify_normalises_input():
    t = LaurentPolynomial.variable()
    assert str(classify(LaurentPolynomial.constant(1))) == "unknot"
    assert str(classify(LaurentPolynomial.constant(-1))) == "unknot"
    five_two = -(2 * t * t - 3 * t + 2).shift(7)
    assert str(classify(five_two)) == "5_2"
    assert classify(five_two).twists == 3


def test_unmatched_polynomial_is_unknown():
    rng = random.Random(5)
    coeffs = [rng.randint(1, 9) for _ in range(6)]
    p = LaurentPolynomial.from_list(coeffs)
    name = classify(p)
    assert name.twists is None
    assert str(name).startswith("unknown(")
    # the cinquefoil is not a twist knot
    t = LaurentPolynomial.variable()
    assert classify(t ** 2 - t + 1 - t ** -1 + t ** -2).twists is None
