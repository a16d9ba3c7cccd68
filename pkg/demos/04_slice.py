"""A lambda = 0.5 slice of the b-plane, written as an indexed PNG and a CSV.

    python demos/04_slice.py [prefix] [resolution]
"""

import sys

from cubicdyn import atlas
from cubicdyn.atlas import SliceSpec

prefix = sys.argv[1] if len(sys.argv) > 1 else "slice_lambda05"
n = int(sys.argv[2]) if len(sys.argv) > 2 else 128

spec = SliceSpec(0.5, (-3, 3, -3, 3), (n, n))
res = atlas.render_slice(spec, workers=2, out_prefix=prefix)
for name, count in sorted(res.counts().items(), key=lambda kv: -kv[1]):
    print(f"{name:>20} {count}")
print("wrote", prefix + ".png", prefix + ".csv")
