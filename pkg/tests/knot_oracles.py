"""Slow, independent reference computations used as test oracles."""
import itertools

import sympy

from lorenz_knots.knots.polynomial import LaurentPolynomial


def brute_force_bracket(pd):
    """Kauffman bracket by enumerating all 2^n states with union-find loop counts."""
    n = len(pd)
    total = {}
    labels = sorted({e for x in pd for e in x})
    for state in itertools.product((0, 1), repeat=n):
        parent = {e: e for e in labels}

        def find(e):
            while parent[e] != e:
                parent[e] = parent[parent[e]]
                e = parent[e]
            return e

        def union(a, b):
            parent[find(a)] = find(b)

        a_count = 0
        for (a, b, c, d), s in zip(pd, state):
            if s == 0:
                union(a, b)
                union(c, d)
                a_count += 1
            else:
                union(a, d)
                union(b, c)
        loops = len({find(e) for e in labels})
        # A^(a - b) d^(loops - 1), d = -A^2 - A^-2
        term = LaurentPolynomial({a_count - (n - a_count): 1}, "A")
        d = LaurentPolynomial({2: -1, -2: -1}, "A")
        term = term * d ** (loops - 1)
        for e, c in term.coeffs.items():
            total[e] = total.get(e, 0) + c
    return LaurentPolynomial(total, "A")


def sympy_alexander(diagram):
    """Alexander polynomial from the Wirtinger matrix with a sympy determinant."""
    t = sympy.Symbol("t")
    n = diagram.n_crossings
    if n == 0:
        return LaurentPolynomial.constant(1)
    arc = 0
    over, inc, out = {}, {}, {}
    for c, o in diagram.gauss:
        if o:
            over[c] = arc
        else:
            inc[c] = arc
            arc = (arc + 1) % n
            out[c] = arc
    M = sympy.zeros(n, n)
    for c in range(n):
        M[c, over[c]] += 1 - t
        if diagram.signs[c] > 0:
            M[c, inc[c]] += t
            M[c, out[c]] += -1
        else:
            M[c, inc[c]] += -1
            M[c, out[c]] += t
    det = sympy.expand(M[1:, 1:].det(method="berkowitz"))
    poly = sympy.Poly(det, t)
    coeffs = {m[0]: int(c) for m, c in zip(poly.monoms(), poly.coeffs())}
    return LaurentPolynomial(coeffs).normalized()


def jones_from_bracket(bracket, writhe):
    """V(q) with q = t^(1/4): (-A^3)^-w <D> at A = q^-1."""
    f = bracket * LaurentPolynomial({-3 * writhe: (-1) ** (writhe % 2)}, "A")
    return LaurentPolynomial({-e: c for e, c in f.coeffs.items()}, "q")
