"""Follow the T-point family upward in rho and compare the knot types found.

Also shows the negative control: at the classical parameters there is no
heteroclinic connection, so no invariant curve can be assembled.
"""
import time

from lorenz_knots import CLASSICAL, Params, assemble_invariant_curve, find_tpoint
from lorenz_knots.errors import AssemblyError
from lorenz_knots.knots import identify
from lorenz_knots.tpoint import miss_distance

GUESSES = [(30.0, 10.0), (85.0, 12.0), (164.0, 13.0)]

print(f"{'guess':>14}  {'rho':>10} {'sigma':>9}  {'partner':>8}  {'crossings':>9}  verdict")
for guess in GUESSES:
    t0 = time.perf_counter()
    tp = find_tpoint(Params(*guess))
    rep = identify(assemble_invariant_curve(tp), seed=1)
    print(f"{str(guess):>14}  {tp.params.rho:10.4f} {tp.params.sigma:9.4f}  {tp.partner:>8}  "
          f"{rep.diagram.n_crossings:9d}  {rep.verdict}  ({time.perf_counter() - t0:.1f} s)")

md = miss_distance(CLASSICAL)
print(f"\nclassical (28, 10, 8/3): d_plus={md.d_plus:.6f} d_minus={md.d_minus:.6f}")
try:
    assemble_invariant_curve(CLASSICAL)
except AssemblyError as exc:
    print("assembly refused:", exc)
