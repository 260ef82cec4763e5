"""Alexander and Jones polynomials of knot diagrams, computed exactly over the integers."""
from __future__ import annotations

from fractions import Fraction

from ..errors import DiagramError, TooManyCrossings
from .diagram import KnotDiagram
from .polynomial import LaurentPolynomial

__all__ = [
    "alexander_matrix",
    "alexander_polynomial",
    "kauffman_bracket",
    "kauffman_bracket_jones",
    "jones_in_t",
    "determinant",
    "MAX_BRACKET_CROSSINGS",
]

MAX_BRACKET_CROSSINGS = 24


def _check_knot(d: KnotDiagram):
    d.validate()


def alexander_matrix(d: KnotDiagram):
    """Wirtinger-derived Alexander matrix as rows of ``{arc: (c0, c1)}`` (entries ``c0 + c1 t``).

    Arcs run from one under-pass to the next; arc ``k`` leaves the ``k``-th
    under-pass met along the orientation.  Relation rows use the free
    differential of ``x_o x_i x_o^-1 x_j^-1`` (positive) or its mirror.
    """
    n = d.n_crossings
    rows = [dict() for _ in range(n)]
    arc = 0
    over_arc, in_arc, out_arc = {}, {}, {}
    for c, over in d.gauss:
        if over:
            over_arc[c] = arc
        else:
            in_arc[c] = arc
            arc = (arc + 1) % n
            out_arc[c] = arc

    def add(row, k, c0, c1):
        a, b = row.get(k, (0, 0))
        row[k] = (a + c0, b + c1)

    for c in range(n):
        r = rows[c]
        add(r, over_arc[c], 1, -1)
        if d.signs[c] > 0:
            add(r, in_arc[c], 0, 1)
            add(r, out_arc[c], -1, 0)
        else:
            add(r, in_arc[c], -1, 0)
            add(r, out_arc[c], 0, 1)
    return rows


def determinant(M) -> int:
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    A = [list(map(int, row)) for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * A[n - 1][n - 1]


def _interpolate(xs, ys):
    """Integer-coefficient polynomial through the points (exact Lagrange)."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        # basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j)
        basis = [Fraction(1)]
        denom = 1
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom *= xs[i] - xs[j]
        for k in range(n):
            coeffs[k] += ys[i] * basis[k] / denom
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise ArithmeticError("non-integral interpolant")
        out.append(int(c))
    return out


def alexander_polynomial(d: KnotDiagram) -> LaurentPolynomial:
    """Normalised Alexander polynomial: centred, positive leading coefficient.

    The ``(n-1)``-minor of the Alexander matrix has degree below ``n`` in
    ``t``; it is evaluated exactly at ``n`` integer points and interpolated.
    """
    _check_knot(d)
    n = d.n_crossings
    if n == 0:
        return LaurentPolynomial.constant(1)
    rows = alexander_matrix(d)
    m = n - 1
    xs = list(range(-(n // 2), n - n // 2))
    ys = []
    for x in xs:
        M = [[0] * m for _ in range(m)]
        for i in range(m):
            for k, (c0, c1) in rows[i].items():
                if k < m:
                    M[i][k] += c0 + c1 * x
        ys.append(determinant(M))
    poly = LaurentPolynomial.from_list(_interpolate(xs, ys))
    if poly.is_zero():
        raise DiagramError("vanishing Alexander minor; diagram is not a knot")
    return poly.normalized()


# ---------------------------------------------------------------------------
# Kauffman bracket


def _crossing_order(pd):
    """Greedy ordering that keeps the set of open edge labels small."""
    remaining = list(range(len(pd)))
    order = []
    open_labels = set()
    while remaining:
        best = max(remaining, key=lambda c: (sum(1 for e in pd[c] if e in open_labels), -c))
        remaining.remove(best)
        order.append(best)
        for e in pd[best]:
            open_labels ^= {e}
    return order


def _merge(matching, pairs):
    """Join the arcs of ``pairs`` onto ``matching``; returns (new_matching, closed_loops)."""
    m = dict(matching)
    loops = 0
    for x, y in pairs:
        if x == y:
            loops += 1
            continue
        ix, iy = x in m, y in m
        if ix and iy:
            px, py = m.pop(x), m.pop(y)
            if px == y:
                loops += 1
            else:
                m[px] = py
                m[py] = px
        elif ix:
            px = m.pop(x)
            m[px] = y
            m[y] = px
        elif iy:
            py = m.pop(y)
            m[py] = x
            m[x] = py
        else:
            m[x] = y
            m[y] = x
    return m, loops


def kauffman_bracket(d: KnotDiagram, max_crossings: int = MAX_BRACKET_CROSSINGS
                     ) -> LaurentPolynomial:
    """Kauffman bracket in ``A`` normalised so the unknot is 1.

    The A-smoothing of ``X[a,b,c,d]`` joins the regions swept counterclockwise by
    the over-strand: ``X[a,b,c,d] -> A P[a,b] P[c,d] + A^-1 P[a,d] P[b,c]``.
    The state sum is accumulated crossing by crossing over partial matchings
    of open edges.
    """
    n = d.n_crossings
    if n > max_crossings:
        raise TooManyCrossings(f"{n} crossings exceed the bracket limit {max_crossings}")
    if n == 0:
        return LaurentPolynomial.constant(1, "A")
    pd = d.pd
    loop = LaurentPolynomial({2: -1, -2: -1}, "A")
    states = {(): {0: 1}}  # matching of open edges -> {A exponent: coeff}
    for c in _crossing_order(pd):
        a, b, cc, dd = pd[c]
        new = {}
        for key, poly in states.items():
            base = {}
            for x, y in key:
                base[x], base[y] = y, x
            for shift, pairs in ((1, ((a, b), (cc, dd))), (-1, ((a, dd), (b, cc)))):
                mm, loops = _merge(base, pairs)
                p = LaurentPolynomial(poly, "A").shift(shift) * (loop ** loops)
                nk = tuple(sorted((x, y) for x, y in mm.items() if x < y))
                acc = new.get(nk)
                new[nk] = (p + LaurentPolynomial(acc, "A")).coeffs if acc else p.coeffs
        states = {k: v for k, v in new.items() if v}
    total = LaurentPolynomial(states.get((), {}), "A")
    return total.divexact(loop)


def kauffman_bracket_jones(d: KnotDiagram, max_crossings: int = MAX_BRACKET_CROSSINGS
                           ) -> LaurentPolynomial:
    """Jones polynomial in ``q = t^(1/4)``, i.e. exponents are four times those of ``t``.

    ``V = (-A^3)^(-w) <D>`` evaluated at ``A = q^-1``.
    """
    br = kauffman_bracket(d, max_crossings)
    w = d.writhe
    f = br * LaurentPolynomial({-3 * w: (-1) ** (w % 2)}, "A")
    return LaurentPolynomial({-e: c for e, c in f.coeffs.items()}, "q")


def jones_in_t(v: LaurentPolynomial) -> dict:
    """Quarter-power Jones polynomial as ``{Fraction exponent of t: coeff}``."""
    return {Fraction(e, 4): c for e, c in v.coeffs.items()}
