"""Twist knots built from half-twists and a clasp, and classification against them."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..errors import DiagramError
from .diagram import KnotDiagram
from .invariants import alexander_polynomial
from .polynomial import LaurentPolynomial

__all__ = ["plat_closure", "twist_knot_diagram", "twist_table", "KnotName", "classify",
           "TWIST_TABLE_SIZE", "trefoil_diagram", "figure_eight_diagram"]

TWIST_TABLE_SIZE = 12
_NAMES = {0: "unknot", 1: "3_1", 2: "4_1", 3: "5_2", 4: "6_1", 5: "7_2", 6: "8_1"}
_CAPS = {0: 1, 1: 0, 2: 3, 3: 2}


def plat_closure(word) -> KnotDiagram:
    """Plat closure of a 4-strand braid.

    ``word`` lists generators ``(i, eps)`` from top to bottom; ``i`` in
    ``{0, 1, 2}`` swaps positions ``i`` and ``i + 1``, and ``eps = +1`` puts
    the strand running from top-left to bottom-right on top.  Positions
    ``(0, 1)`` and ``(2, 3)`` are joined by caps above and cups below.
    """
    word = [(int(i), int(e)) for i, e in word]
    L = len(word)
    gauss = []
    dirs = {}  # level -> {"a"/"b": planar direction of travel}
    pos, down, level = 0, True, 0
    for _ in range(4 * L + 8):
        if down:
            while level < L:
                i, eps = word[level]
                if pos in (i, i + 1):
                    # strand a joins (i, top) to (i+1, bottom), strand b the other pair
                    on_a = pos == i
                    gauss.append((level, on_a == (eps > 0)))
                    dirs.setdefault(level, {})["a" if on_a else "b"] = \
                        (1, -1) if on_a else (-1, -1)
                    pos = i + 1 if on_a else i
                level += 1
            pos, down, level = _CAPS[pos], False, L - 1
        else:
            while level >= 0:
                i, eps = word[level]
                if pos in (i, i + 1):
                    on_a = pos == i + 1
                    gauss.append((level, on_a == (eps > 0)))
                    dirs.setdefault(level, {})["a" if on_a else "b"] = \
                        (-1, 1) if on_a else (1, 1)
                    pos = i if on_a else i + 1
                level -= 1
            pos, down, level = _CAPS[pos], True, 0
        if (pos, down, level) == (0, True, 0):
            break
    if len(gauss) != 2 * L or any(len(v) != 2 for v in dirs.values()):
        raise DiagramError("plat closure has more than one component")
    signs = {}
    for lv, (i, eps) in enumerate(word):
        a, b = dirs[lv]["a"], dirs[lv]["b"]
        o, u = (a, b) if eps > 0 else (b, a)
        signs[lv] = 1 if o[0] * u[1] - o[1] * u[0] > 0 else -1
    return KnotDiagram.from_gauss(gauss, signs)


@lru_cache(maxsize=None)
def twist_knot_diagram(n: int) -> KnotDiagram:
    """Canonical diagram of the twist knot with ``n`` half-twists (``n = 0`` is the unknot).

    Plat closure of ``sigma_2^n sigma_1^-1 sigma_2``: ``n`` half-twists of two
    parallel strands followed by a two-crossing clasp, ``n + 2`` crossings in
    all.  The clasp handedness is fixed by requiring determinant ``2n + 1``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return KnotDiagram.unknot()
    d = plat_closure([(1, 1)] * n + [(0, -1), (1, 1)])
    det = abs(alexander_polynomial(d)(-1))
    if det != 2 * n + 1:
        raise DiagramError(f"twist knot {n}: determinant {det}, expected {2 * n + 1}")
    return d


def trefoil_diagram() -> KnotDiagram:
    return twist_knot_diagram(1)


def figure_eight_diagram() -> KnotDiagram:
    return twist_knot_diagram(2)


@lru_cache(maxsize=None)
def twist_table(size: int = TWIST_TABLE_SIZE) -> dict:
    """``{normalised Alexander polynomial: n}`` generated from the canonical diagrams."""
    table = {}
    for n in range(size + 1):
        table.setdefault(alexander_polynomial(twist_knot_diagram(n)), n)
    return table


@dataclass(frozen=True)
class KnotName:
    """Classification result; ``twists`` is None for unmatched polynomials."""

    name: str
    twists: int | None
    poly: LaurentPolynomial

    def __str__(self):
        return self.name


def classify(poly: LaurentPolynomial) -> KnotName:
    """Match a normalised Alexander polynomial against the twist-knot table."""
    p = poly.normalized()
    n = twist_table().get(p)
    if n is None:
        return KnotName(f"unknown({p})", None, p)
    return KnotName(_NAMES.get(n, f"twist({n})"), n, p)
