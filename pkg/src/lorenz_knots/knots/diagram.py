"""Oriented knot diagrams as signed Gauss codes, with PD codes and Reidemeister moves.

A diagram with ``n`` crossings is a cyclic sequence of ``2n`` visits
``(crossing, over)`` in the order met along the knot, plus one sign per
crossing.  Edge ``k`` (PD label ``k + 1``) runs from visit ``k`` to visit
``k + 1``.  PD records list the four incident edges counterclockwise starting
from the incoming under-strand, as in KnotTheory::

    positive crossing   X[in_under, out_over, out_under, in_over]
    negative crossing   X[in_under, in_over, out_under, out_over]

so the left-handed trefoil is ``X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..errors import DiagramError

__all__ = ["KnotDiagram", "random_reidemeister_move", "reidemeister_simplify"]


def _canonical(gauss, signs):
    """Relabel crossings by order of first appearance; ``signs`` is a dict."""
    relabel = {}
    for c, _ in gauss:
        if c not in relabel:
            relabel[c] = len(relabel)
    g = tuple((relabel[c], bool(o)) for c, o in gauss)
    s = [0] * len(relabel)
    for c, k in relabel.items():
        s[k] = int(signs[c])
    return g, tuple(s)


@dataclass(frozen=True)
class KnotDiagram:
    """Signed Gauss code of an oriented knot diagram (value type).

    Parameters
    ----------
    gauss
        Visits ``(label, over)`` in traversal order.  Labels are
        ``0..n-1`` in order of first appearance.
    signs
        ``signs[label]`` is the crossing sign, +1 or -1.
    meta
        Free-form provenance (projection direction, seed...), not compared.
    """

    gauss: tuple
    signs: tuple
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def from_gauss(cls, gauss, signs, meta=None, validate: bool = True) -> "KnotDiagram":
        """Build from visits with arbitrary hashable labels; ``signs`` maps label -> sign."""
        if not isinstance(signs, dict):
            signs = dict(enumerate(signs))
        g, s = _canonical(list(gauss), signs)
        d = cls(g, s, dict(meta or {}))
        if validate:
            d.validate()
        return d

    @classmethod
    def unknot(cls) -> "KnotDiagram":
        return cls((), ())

    # basic structure

    @property
    def n_crossings(self) -> int:
        return len(self.signs)

    @property
    def arcs(self) -> int:
        """Number of edges of the 4-valent graph (``2n``)."""
        return len(self.gauss)

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    def validate(self) -> None:
        n = len(self.signs)
        if len(self.gauss) != 2 * n:
            raise DiagramError("Gauss code length must be twice the crossing count")
        seen = {}
        for c, o in self.gauss:
            if not 0 <= c < n:
                raise DiagramError(f"crossing label {c} out of range")
            seen.setdefault(c, []).append(o)
        for c in range(n):
            if sorted(seen.get(c, [])) != [False, True]:
                raise DiagramError(f"crossing {c} must be visited once over and once under")
            if self.signs[c] not in (1, -1):
                raise DiagramError(f"crossing {c} has sign {self.signs[c]}")
        if n and not self.is_planar():
            raise DiagramError("signed Gauss code is not realisable in the plane")

    def positions(self):
        """``{label: (over_position, under_position)}``."""
        pos = {}
        for k, (c, o) in enumerate(self.gauss):
            pos.setdefault(c, [None, None])[0 if o else 1] = k
        return {c: tuple(v) for c, v in pos.items()}

    # PD codes

    def _ein(self, k):
        return k if k > 0 else len(self.gauss)

    def _eout(self, k):
        return k + 1

    @property
    def pd(self) -> list:
        """PD code, one 4-tuple per crossing in label order."""
        out = []
        for c, (o, u) in sorted(self.positions().items()):
            if self.signs[c] > 0:
                out.append((self._ein(u), self._eout(o), self._eout(u), self._ein(o)))
            else:
                out.append((self._ein(u), self._ein(o), self._eout(u), self._eout(o)))
        return out

    @classmethod
    def from_pd(cls, pd, meta=None) -> "KnotDiagram":
        """Inverse of :attr:`pd` for a one-component PD code.

        The over-strand orientation is read from consecutive edge labels.
        """
        pd = [tuple(int(v) for v in x) for x in pd]
        if not pd:
            return cls.unknot()
        m = 2 * len(pd)
        labels = sorted(v for x in pd for v in x)
        if labels != sorted(list(range(1, m + 1)) * 2):
            raise DiagramError("PD labels must be 1..2n, each used twice")

        def succ(e):
            return e % m + 1

        visit_at = {}  # incoming edge label -> (crossing, over, sign)
        for c, (a, b, cc, d) in enumerate(pd):
            if succ(a) != cc:
                raise DiagramError(f"X{pd[c]}: under-strand labels are not consecutive")
            if succ(d) == b:
                sign, ein_o = 1, d
            elif succ(b) == d:
                sign, ein_o = -1, b
            else:
                raise DiagramError(f"X{pd[c]}: over-strand labels are not consecutive")
            visit_at[a] = (c, False, sign)
            visit_at[ein_o] = (c, True, sign)
        if len(visit_at) != m:
            raise DiagramError("PD code is not a single oriented component")
        gauss, signs = [], {}
        # visit k has incoming edge k (2n for the first visit)
        for k in range(m):
            c, over, sign = visit_at[m if k == 0 else k]
            gauss.append((c, over))
            signs[c] = sign
        return cls.from_gauss(gauss, signs, meta)

    def pd_text(self, orientation: str = "pd-edge-order") -> str:
        """PD code as text: a header then one ``X a,b,c,d`` line per crossing."""
        lines = [f"# arcs={self.arcs} orientation={orientation}"]
        lines += ["X " + ",".join(str(v) for v in x) for x in self.pd]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_pd_text(cls, text: str) -> "KnotDiagram":
        pd = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if not line.startswith("X"):
                raise DiagramError(f"unrecognised PD line {line!r}")
            pd.append(tuple(int(v) for v in line[1:].split(",")))
        return cls.from_pd(pd)

    # planar structure

    def faces(self) -> list:
        """Faces of the diagram as lists of ``(crossing, slot)`` corners.

        Corner ``(c, i)`` is the region between PD slots ``i`` and ``i + 1``
        (counterclockwise) at crossing ``c``.
        """
        pd = self.pd
        occ = {}
        for c, x in enumerate(pd):
            for i, e in enumerate(x):
                occ.setdefault(e, []).append((c, i))

        def other(c, i):
            a, b = occ[pd[c][i]]
            return b if a == (c, i) else a

        seen = set()
        faces = []
        for c in range(len(pd)):
            for i in range(4):
                if (c, i) in seen:
                    continue
                face = []
                cur = (c, i)
                while cur not in seen:
                    seen.add(cur)
                    face.append(cur)
                    cur = other(cur[0], (cur[1] + 1) % 4)
                faces.append(face)
        return faces

    def face_edges(self) -> list:
        """Faces as lists of Gauss edge indices (edge ``k`` runs visit ``k`` -> ``k + 1``)."""
        pd = self.pd
        return [[pd[c][(i + 1) % 4] - 1 for c, i in f] for f in self.faces()]

    def is_planar(self) -> bool:
        n = self.n_crossings
        return n == 0 or len(self.faces()) == n + 2

    # symmetries

    def mirror(self) -> "KnotDiagram":
        return KnotDiagram(tuple((c, not o) for c, o in self.gauss),
                           tuple(-s for s in self.signs), dict(self.meta))

    def reversed(self) -> "KnotDiagram":
        return KnotDiagram.from_gauss(list(reversed(self.gauss)), list(self.signs), self.meta,
                                      validate=False)

    def rotated(self, k: int) -> "KnotDiagram":
        """Same diagram with the traversal starting at visit ``k``."""
        if not self.gauss:
            return self
        k %= len(self.gauss)
        g = self.gauss[k:] + self.gauss[:k]
        return KnotDiagram.from_gauss(g, list(self.signs), self.meta, validate=False)

    # Reidemeister moves

    def _edge_ends(self, e):
        m = len(self.gauss)
        return self.gauss[e], self.gauss[(e + 1) % m]

    def r1_sites(self) -> list:
        """Edges that are monogon loops (start and end at the same crossing)."""
        m = len(self.gauss)
        return [e for e in range(m) if m and self.gauss[e][0] == self.gauss[(e + 1) % m][0]]

    def r2_sites(self) -> list:
        """Bigon faces bounded by an over-over edge and an under-under edge."""
        out = []
        for edges in self.face_edges():
            if len(edges) != 2:
                continue
            e1, e2 = edges
            (a1, o1), (b1, p1) = self._edge_ends(e1)
            (a2, o2), (b2, p2) = self._edge_ends(e2)
            if a1 == b1 or {a1, b1} != {a2, b2} or e1 == e2:
                continue
            if o1 == p1 and o2 == p2 and o1 != o2 and self.signs[a1] != self.signs[b1]:
                out.append((e1, e2))
        return out

    def r3_sites(self) -> list:
        """Triangle faces on which a third-move slide is possible."""
        out = []
        for edges in self.face_edges():
            if len(edges) != 3 or len(set(edges)) != 3:
                continue
            kinds = []
            crossings = set()
            for e in edges:
                (a, o), (b, p) = self._edge_ends(e)
                crossings.update((a, b))
                kinds.append((o, p))
            if len(crossings) != 3:
                continue
            kinds = sorted((o + p) for o, p in kinds)
            if kinds == [0, 1, 2]:
                out.append(tuple(edges))
        return out

    def _remove_visits(self, labels):
        g = [v for v in self.gauss if v[0] not in labels]
        s = {c: self.signs[c] for c in range(self.n_crossings) if c not in labels}
        return KnotDiagram.from_gauss(g, s, self.meta, validate=False)

    def apply_r1(self, e: int) -> "KnotDiagram":
        return self._remove_visits({self.gauss[e][0]})

    def apply_r2(self, site) -> "KnotDiagram":
        (a, _), (b, _) = self._edge_ends(site[0])
        return self._remove_visits({a, b})

    def apply_r3(self, site) -> "KnotDiagram":
        m = len(self.gauss)
        g = list(self.gauss)
        for e in site:
            g[e], g[(e + 1) % m] = g[(e + 1) % m], g[e]
        d = KnotDiagram.from_gauss(g, list(self.signs), self.meta, validate=False)
        if not d.is_planar():
            raise DiagramError("third-move slide produced a non-planar code")
        return d

    def add_r1(self, e: int, over_first: bool, sign: int) -> "KnotDiagram":
        """Insert a kink on edge ``e`` (any edge of a nonempty diagram; ignored if empty)."""
        new = self.n_crossings
        g = list(self.gauss)
        kink = [(new, over_first), (new, not over_first)]
        at = e + 1 if g else 0
        g[at:at] = kink
        s = dict(enumerate(self.signs))
        s[new] = sign
        return KnotDiagram.from_gauss(g, s, self.meta, validate=False)

    def add_r2_candidates(self, e_over: int, e_under: int) -> list:
        """All valid second-move insertions pushing edge ``e_over`` over ``e_under``."""
        if e_over == e_under:
            return []
        n = self.n_crossings
        a, b = n, n + 1
        out = []
        for under_order in ((b, a), (a, b)):
            for sa in (1, -1):
                g = list(self.gauss)
                ins = {e_over: [(a, True), (b, True)],
                       e_under: [(under_order[0], False), (under_order[1], False)]}
                for e in sorted(ins, reverse=True):
                    g[e + 1:e + 1] = ins[e]
                s = dict(enumerate(self.signs))
                s[a], s[b] = sa, -sa
                d = KnotDiagram.from_gauss(g, s, self.meta, validate=False)
                if not d.is_planar():
                    continue
                # canonical relabelling keeps positions, so find the new labels there
                new = {d.gauss[k][0] for k, v in enumerate(g) if v[0] in (a, b)}
                for site in d.r2_sites():
                    (x, _), (y, _) = d._edge_ends(site[0])
                    if {x, y} == new:
                        out.append(d)
                        break
        return out


def random_reidemeister_move(d: KnotDiagram, rng: random.Random, kinds=("R1+", "R1-", "R2+",
                             "R2-", "R3")):
    """Apply one randomly chosen applicable Reidemeister move.

    Returns ``(new_diagram, move_name)``; adding a kink is always possible so
    a move is always made.
    """
    options = list(kinds)
    rng.shuffle(options)
    for kind in options:
        if kind == "R1-":
            sites = d.r1_sites()
            if sites:
                return d.apply_r1(rng.choice(sites)), kind
        elif kind == "R2-":
            sites = d.r2_sites()
            if sites:
                return d.apply_r2(rng.choice(sites)), kind
        elif kind == "R3":
            sites = d.r3_sites()
            if sites:
                return d.apply_r3(rng.choice(sites)), kind
        elif kind == "R2+" and d.n_crossings:
            faces = [f for f in d.face_edges() if len(set(f)) >= 2]
            rng.shuffle(faces)
            for f in faces:
                e1, e2 = rng.sample(sorted(set(f)), 2)
                cands = d.add_r2_candidates(e1, e2)
                if cands:
                    return rng.choice(cands), kind
        elif kind == "R1+":
            e = rng.randrange(max(1, d.arcs))
            return d.add_r1(e, rng.random() < 0.5, rng.choice((1, -1))), kind
    e = rng.randrange(max(1, d.arcs))
    return d.add_r1(e, True, 1), "R1+"


def _reduce_once(d):
    sites = d.r1_sites()
    if sites:
        return d.apply_r1(sites[0])
    sites = d.r2_sites()
    if sites:
        return d.apply_r2(sites[0])
    return None


def reidemeister_simplify(d: KnotDiagram, r3_depth: int = 2) -> KnotDiagram:
    """Greedy crossing reduction by first and second moves.

    When neither applies, sequences of up to ``r3_depth`` third moves are
    searched for one that unlocks a reduction.  The result never has more
    crossings than the input.
    """
    while True:
        nxt = _reduce_once(d)
        if nxt is not None:
            d = nxt
            continue
        nxt = _r3_unlock(d, r3_depth)
        if nxt is None:
            return d
        d = nxt


def _r3_unlock(d, depth):
    frontier = [d]
    seen = {d.gauss}
    for _ in range(depth):
        nxt_frontier = []
        for cur in frontier:
            for site in cur.r3_sites():
                try:
                    cand = cur.apply_r3(site)
                except DiagramError:
                    continue
                if cand.gauss in seen:
                    continue
                seen.add(cand.gauss)
                red = _reduce_once(cand)
                if red is not None:
                    return red
                nxt_frontier.append(cand)
        frontier = nxt_frontier
        if not frontier:
            break
    return None
