"""Brute-force reference implementations used by the tests.

Each oracle takes a different route from the library code it checks:
circular order by sorting instead of arc membership, subset enumeration
instead of backtracking or dynamic programming, resultants instead of
Newton iteration, plain float geometry instead of face splitting.
"""

from __future__ import annotations

import functools
import itertools
import math
from fractions import Fraction

# ---------------------------------------------------------------- angles


def all_angles(qmax: int) -> list[Fraction]:
    return sorted({Fraction(a, q) for q in range(1, qmax + 1) for a in range(q)})


def all_chords(qmax: int) -> list[tuple[Fraction, Fraction]]:
    return list(itertools.combinations(all_angles(qmax), 2))


def cross_oracle(c1, c2) -> bool:
    """Chords cross iff their four endpoints are distinct and alternate in sorted order."""
    pts = [(c1[0], 1), (c1[1], 1), (c2[0], 2), (c2[1], 2)]
    if len({p for p, _ in pts}) < 4:
        return False
    tags = [t for _, t in sorted(pts)]
    return tags in ([1, 2, 1, 2], [2, 1, 2, 1])


def disjoint_oracle(c1, c2) -> bool:
    return len({*c1, *c2}) == 4 and not cross_oracle(c1, c2)


@functools.lru_cache(maxsize=None)
def tuple_sigma(x: Fraction, d: int) -> Fraction:
    y = x * d
    return y - math.floor(y)


@functools.lru_cache(maxsize=None)
def chord_image(c, d):
    a, b = tuple_sigma(c[0], d), tuple_sigma(c[1], d)
    return (min(a, b), max(a, b))


def noncrossing_families(chords, k: int):
    """Every family of at most k pairwise non-crossing chords (brute force over subsets)."""
    for r in range(k + 1):
        for fam in itertools.combinations(chords, r):
            if all(not cross_oracle(x, y) for x, y in itertools.combinations(fam, 2)):
                yield fam


# ---------------------------------------------------------------- sibling invariance


def sibling_oracle(leaves, d: int = 3) -> set[int]:
    """Conditions (1)-(3) that fail, by direct enumeration.

    Preimages are only required when some preimage chord has both endpoint
    denominators no larger than the largest denominator among the leaves.
    """
    leaves = [c for c in leaves if c[0] != c[1]]
    S = set(leaves)
    failed = set()
    max_den = max((x.denominator for c in leaves for x in c), default=1)
    for c in leaves:
        img = chord_image(c, d)
        if img[0] != img[1] and img not in S:
            failed.add(1)
        pre_a = [tuple_sigma((c[0] + k) / d, 1) for k in range(d)]
        pre_b = [tuple_sigma((c[1] + k) / d, 1) for k in range(d)]
        demanded = any(x.denominator <= max_den and y.denominator <= max_den
                       for x in pre_a for y in pre_b)
        if demanded and not any(chord_image(e, d) == c for e in leaves):
            failed.add(2)
        if img[0] != img[1]:
            sibs = [e for e in leaves if chord_image(e, d) == img]
            ok = any(c in fam and all(disjoint_oracle(x, y) for x, y in itertools.combinations(fam, 2))
                     for fam in itertools.combinations(sibs, d))
            if not ok:
                failed.add(3)
    return failed


# ---------------------------------------------------------------- gaps


def _pt(x):
    t = 2 * math.pi * float(x)
    return math.cos(t), math.sin(t)


def _side(c, p):
    (x1, y1), (x2, y2) = _pt(c[0]), _pt(c[1])
    return (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1)


def face_count_oracle(leaves) -> int:
    """Faces of a chord arrangement as distinct side-vectors of sample points.

    Samples: points just inside the midpoint of every circle arc between
    consecutive endpoints (each face touching the circle gets one), and
    centroids of all endpoint triples (faces bounded only by leaves).
    """
    leaves = [c for c in leaves if c[0] != c[1]]
    if not leaves:
        return 1
    ends = sorted({x for c in leaves for x in c})
    samples = []
    for i, a in enumerate(ends):
        b = ends[(i + 1) % len(ends)]
        span = (b - a) % 1 or Fraction(1)
        t = 2 * math.pi * float(a + span / 2)
        samples.append((0.999999 * math.cos(t), 0.999999 * math.sin(t)))
    for tri in itertools.combinations(ends, 3):
        ps = [_pt(x) for x in tri]
        samples.append((sum(p[0] for p in ps) / 3, sum(p[1] for p in ps) / 3))
    sigs = set()
    for p in samples:
        s = [_side(c, p) for c in leaves]
        if any(abs(v) < 1e-12 for v in s):
            continue
        sigs.add(tuple(v > 0 for v in s))
    return len(sigs)


def gap_degree_oracle(vertices, edges, d: int = 3) -> int:
    """Largest subset of pairwise disjoint critical non-edge chords, by subset search, plus one."""
    vs = sorted(vertices)
    E = {tuple(sorted(e)) for e in edges}
    crit = [(a, b) for a, b in itertools.combinations(vs, 2)
            if tuple_sigma(a, d) == tuple_sigma(b, d) and (a, b) not in E]
    if len(vs) == 3 and len(E) == 3 and all(tuple_sigma(a, d) == tuple_sigma(b, d) for a, b in E):
        return 3
    best = 0
    for r in range(len(crit), 0, -1):
        if any(all(disjoint_oracle(x, y) for x, y in itertools.combinations(fam, 2))
               for fam in itertools.combinations(crit, r)):
            best = r
            break
    return best + 1


# ---------------------------------------------------------------- center curves


def center_polynomial(lam, n: int):
    """Coefficients in b (highest first) of the resultant over c of
    f'(c) = 3c^2 + 2bc + lam and the new factor of f^n(c) at step n.

    f^n(c) = f^{n-1}(c) * (lam + b f^{n-1}(c) + f^{n-1}(c)^2), so the factor
    that vanishes first at step n is P_n = lam + b w + w^2 with w = f^{n-1}(c)
    (and P_1 = lam + b c + c^2).
    """
    import sympy as sp

    b, c = sp.symbols("b c")
    L = sp.nsimplify(lam) if isinstance(lam, (int, float)) else sp.sympify(lam)
    w = c
    for _ in range(n - 1):
        w = sp.expand(w * (L + b * w + w**2))
    P = sp.expand(L + b * w + w**2)
    R = sp.resultant(P, 3 * c**2 + 2 * b * c + L, c)
    poly = sp.Poly(sp.expand(R), b)
    return [complex(x) for x in poly.all_coeffs()]
