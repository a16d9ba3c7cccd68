"""Invariant laminations under angle tripling, by hand.

Start from the fixed leaf 0-1/2, add its two siblings, check the sibling
conditions and look at the gaps the three leaves cut out of the disk.
"""

from fractions import Fraction as F

from cubicdyn import lamina
from cubicdyn.lamina import Gap, Lamination, chord

leaf = chord("0 1/2")
print("sigma_3 image of", leaf, "is", leaf.image(3))

lam = Lamination([leaf, chord("1/6 1/3"), chord("2/3 5/6")])
rep = lamina.check_sibling_invariant(lam)
print("sibling invariant:", rep.passed)

# a lone leaf is not invariant: its image is missing and it has no siblings
print("1/6-1/3 alone fails conditions", sorted(lamina.check_sibling_invariant(Lamination([chord("1/6 1/3")])).failed_conditions()))

for g in lamina.gaps(lam):
    print("gap", [str(v) for v in g.vertices], "degree", lamina.gap_degree(g, 3))

# the big gap bounded by all three leaves is quadratic; its major is the fixed leaf
big = max(lamina.gaps(lam), key=lambda g: len(g.vertices))
m = lamina.quadratic_gap_major(big)
print("major", m.leaf, m.kind, "period", m.period)

# the critical triangle is the exception: degree 3
print("triangle {0,1/3,2/3} degree", lamina.gap_degree(Gap.polygon([0, F(1, 3), F(2, 3)]), 3))
