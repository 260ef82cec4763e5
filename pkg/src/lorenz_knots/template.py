"""Periodic orbits of the Lorenz template from L/R words, and their modular-group matrices.

A primitive word ``w`` of length ``n`` is a periodic orbit of the one-sided
shift.  Its ``n`` points on the branch line are the rotations of ``w``,
ordered lexicographically as infinite periodic sequences with ``L < R``.
Each pass through the template sends the point with itinerary ``s`` to the
one with itinerary ``shift(s)``; points starting with ``L`` travel through
the left ear, those starting with ``R`` through the right ear.  Both ears
preserve the order of their strands, and where the two ears merge back onto
the branch line the left-ear strands pass over the right-ear strands.  This
is the Lorenz braid; its closure is the knot of the orbit.

Geometry of the piecewise-linear model (branch line along ``x``)::

    y = 0        o  o  o  o         strands at x = rank
                  \\  \\ /  /         left-ear strands at z = +1, right-ear at z = -1
    y = -H       o  o  o  o         strands at x = rank of the shifted itinerary

The closing loops return in the plane ``z = 0`` around the right-hand side,
nested so that they never cross.
"""
from __future__ import annotations

from dataclasses import dataclass
from concurrent.futures import ProcessPoolExecutor
from itertools import product

import numpy as np

from .assembly import ClosedCurve
from .knots import KnotName, KnotReport, identify
from .knots.invariants import alexander_polynomial

__all__ = [
    "IntegerMatrix2",
    "L_MATRIX",
    "R_MATRIX",
    "normalize_word",
    "is_primitive",
    "rotations",
    "word_to_matrix",
    "branch_order",
    "lorenz_permutation",
    "template_orbit",
    "orbit_report",
    "orbit_knot_type",
    "words_of_length",
    "first_word_of_type",
    "MAX_WORD_LENGTH",
]

MAX_WORD_LENGTH = 16
# a slightly tilted view of the braid plane keeps the diagram close to the braid
TEMPLATE_VIEW = (0.0123, 0.0317, 1.0)


@dataclass(frozen=True)
class IntegerMatrix2:
    a: int
    b: int
    c: int
    d: int

    def __matmul__(self, other: "IntegerMatrix2") -> "IntegerMatrix2":
        return IntegerMatrix2(self.a * other.a + self.b * other.c,
                              self.a * other.b + self.b * other.d,
                              self.c * other.a + self.d * other.c,
                              self.c * other.b + self.d * other.d)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def tolist(self):
        return [[self.a, self.b], [self.c, self.d]]


L_MATRIX = IntegerMatrix2(1, 1, 0, 1)
R_MATRIX = IntegerMatrix2(1, 0, 1, 1)


def normalize_word(w) -> str:
    """Upper-case word over ``{L, R}``; raises ``ValueError`` otherwise."""
    s = "".join(w).strip().upper() if not isinstance(w, str) else w.strip().upper()
    if not s or set(s) - {"L", "R"}:
        raise ValueError(f"template word must be a nonempty string over L, R: {w!r}")
    return s


def rotations(w: str) -> list:
    w = normalize_word(w)
    return [w[k:] + w[:k] for k in range(len(w))]


def is_primitive(w: str) -> bool:
    """True unless ``w`` is a proper power ``u^k``, ``k > 1``."""
    w = normalize_word(w)
    return (w + w).find(w, 1) == len(w)


def word_to_matrix(w: str) -> IntegerMatrix2:
    """Product of ``L = [[1,1],[0,1]]`` and ``R = [[1,0],[1,1]]`` in word order."""
    m = IntegerMatrix2(1, 0, 0, 1)
    for ch in normalize_word(w):
        m = m @ (L_MATRIX if ch == "L" else R_MATRIX)
    return m


def branch_order(w: str) -> list:
    """Rotation offsets of ``w`` sorted by their position on the branch line (left to right).

    For period ``n`` sequences, comparing one period decides the order.
    """
    w = normalize_word(w)
    if not is_primitive(w):
        raise ValueError(f"word {w!r} is a proper power")
    rots = rotations(w)
    return sorted(range(len(w)), key=lambda k: rots[k])


def lorenz_permutation(w: str):
    """``(letters, perm)``: first letter and image position of each branch-line strand."""
    w = normalize_word(w)
    order = branch_order(w)
    n = len(w)
    rank = {k: i for i, k in enumerate(order)}
    letters = [w[k] for k in order]
    perm = [rank[(k + 1) % n] for k in order]
    return letters, perm


def template_orbit(w: str, height: float = 8.0, spacing: float = 1.0, depth: float = 1.0,
                   loop_gap: float = 1.0) -> ClosedCurve:
    """Closed PL curve of the periodic orbit ``w`` on the template model."""
    w = normalize_word(w)
    if not is_primitive(w):
        raise ValueError(f"word {w!r} is a proper power; its orbit is a multiple cover")
    letters, perm = lorenz_permutation(w)
    n = len(w)
    H = float(height)
    right = (n - 1) * spacing

    def strand(i):
        x0, x1 = i * spacing, perm[i] * spacing
        z = depth if letters[i] == "L" else -depth
        return [(x0, 0.0, 0.0), (x0, -0.25 * H, z), (x1, -0.75 * H, z), (x1, -H, 0.0)]

    def closing(k):
        x = k * spacing
        c = (n - k) * loop_gap
        return [(x, -H - c, 0.0), (right + c, -H - c, 0.0), (right + c, c, 0.0), (x, c, 0.0)]

    pts = []
    i = 0
    for _ in range(n):
        pts.extend(strand(i))
        k = perm[i]
        pts.extend(closing(k))
        i = k
    if i != 0:
        raise AssertionError("Lorenz permutation of a primitive word is a single cycle")
    return ClosedCurve(np.array(pts, dtype=float), {"branch_line": 0}, None,
                       {"word": w, "length": n})


def orbit_report(w: str, seed: int = 0) -> KnotReport:
    w = normalize_word(w)
    if len(w) > MAX_WORD_LENGTH:
        raise ValueError(f"word length {len(w)} exceeds {MAX_WORD_LENGTH}")
    return identify(template_orbit(w), seed=seed, direction=TEMPLATE_VIEW)


def orbit_knot_type(w: str, seed: int = 0) -> KnotName:
    """template_orbit -> project -> simplify -> Alexander -> classify."""
    return orbit_report(w, seed).name


def words_of_length(n: int):
    """All words of length ``n`` in lexicographic order (``L < R``)."""
    return ["".join(p) for p in product("LR", repeat=n)]


def _classify_word(w):
    if not is_primitive(w):
        return w, None, None
    rep = orbit_report(w)
    return w, rep.verdict, rep.diagram.pd_text()


def first_word_of_type(target: str = "3_1", max_length: int = 8, jobs: int = 1):
    """First primitive word in length-lex order whose orbit is ``target``.

    Returns ``(word, pd_text)`` or ``None``.  Results are gathered in word
    order, so the answer does not depend on ``jobs``.
    """
    for n in range(1, max_length + 1):
        words = words_of_length(n)
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_classify_word, words))
        else:
            results = [_classify_word(w) for w in words]
        for w, verdict, pd in results:
            if verdict == target:
                return w, pd
    return None


def alexander_of_word(w: str):
    return alexander_polynomial(orbit_report(w).diagram)
