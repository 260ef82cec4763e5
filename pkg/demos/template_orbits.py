"""Knot types of short periodic orbits on the Lorenz template.

Each primitive L/R word is an orbit; its matrix in SL(2, Z) is the product of
``L = [[1,1],[0,1]]`` and ``R = [[1,0],[1,1]]``.  Words are grouped up to
rotation, since rotations describe the same orbit.
"""
import argparse

from lorenz_knots.template import (
    first_word_of_type,
    is_primitive,
    orbit_report,
    rotations,
    word_to_matrix,
    words_of_length,
)

parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
parser.add_argument("--max-length", type=int, default=7)
args = parser.parse_args()

seen = set()
for n in range(1, args.max_length + 1):
    for w in words_of_length(n):
        if not is_primitive(w) or min(rotations(w)) in seen:
            continue
        seen.add(min(rotations(w)))
        rep = orbit_report(w)
        m = word_to_matrix(w)
        print(f"{w:>10}  trace {m.trace:4d}  crossings {rep.diagram.n_crossings:2d}  "
              f"{rep.verdict}")

word, pd = first_word_of_type("3_1", args.max_length)
print(f"\nfirst trefoil word: {word}\n{pd}")
