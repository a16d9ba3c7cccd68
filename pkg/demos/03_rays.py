"""External rays of a capture polynomial and the rational lamination they cut out."""

from fractions import Fraction as F

from cubicdyn import lamina, rays
from cubicdyn.cubic import CubicParams

p = CubicParams(0.5, 2.2437490787133227j)  # the co-critical point maps to 0 in two steps

ray = rays.trace_ray(p, F(1, 6), 1e-4)
print("ray 1/6:", len(ray.points), "points, last", ray.points[-1])

for a in ("0", "1/2", "1/6", "1/3"):
    rec = rays.land_rational_ray(p, a)
    print(f"angle {a:>4}: lands at {rec.landing_point:.6f}, period {rec.period}, preperiod {rec.preperiod},"
          f" |multiplier| {abs(rec.multiplier):.4f} [{rec.status}]")

lam = rays.rational_lamination_sample(p, 6)
print("co-landing leaves up to denominator 6:", [str(c) for c in lam.leaves])
print("sibling invariant:", lamina.check_sibling_invariant(lam).passed)

# the leaf 0-1/2 keeps its landing point while b moves inside the component
path = [CubicParams(0.5, 2.2437490787133227j + k * 0.01) for k in range(1, 4)]
st = rays.leaf_stability_probe(p, lamina.chord("0 1/2"), path)
print("leaf 0-1/2 persists:", st.persists, "landing point moved by", st.motion)
