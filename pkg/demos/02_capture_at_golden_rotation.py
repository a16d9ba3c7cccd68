"""A critical point eventually landing in a Siegel disk, and what perturbing does to it.

At lambda = exp(2 pi i gamma), gamma the golden mean, solve f^3(c) = 0 for a
critical point c.  Nudge c off 0's preimage and watch its orbit rotate around 0.
Then push lambda radially into the disk and classify the hyperbolic maps
that appear.
"""

import cmath
import math

from cubicdyn import atlas, brjuno, cubic
from cubicdyn.cubic import CubicParams

theta = brjuno.golden_mean(64)
lam = cmath.exp(2j * math.pi * float(theta))

centers = cubic.center_points(lam, 3)
print(len(centers), "parameters with f^3(c) = 0")
q = centers[0]
p = CubicParams(lam, q.b)
print("b =", q.b, " c =", q.c, " |f^3(c)| =", abs(cubic.iterate(p, q.c, 3)))

lin = cubic.siegel_lower_bound(lam, q.b)
print("linearization disk radius at least", lin.r_in)

# c is critical, so a 1e-9 nudge moves f(c) only by about 1e-18: the orbit
# reaches a tiny circle around 0 and then rotates rigidly on it
ev = cubic.siegel_capture_probe(p, float(theta), z0=q.c + 1e-9)
print("probe:", ev.verdict, "entry", ev.entry, "tail radii", ev.tail_radius_range)

# nudging the critical value instead lands the orbit on a visible invariant curve
ev = cubic.siegel_capture_probe(p, float(theta), z0=cubic.evaluate(p, q.c) + 0.05 * lin.r_in)
print("probe from f(c) + small offset:", ev.verdict, "tail radii", ev.tail_radius_range)

print("label on the circle:", atlas.classify_point(lam, q.b))

ladder = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6]
rep = atlas.perturbation_path_report(p, ladder)
for r in rep.rungs:
    print(f"  eps = {r['eps']:.0e}: {r['name']}")
print("stabilized:", rep.stabilized, "->", f"{rep.label}({rep.k})")
