"""Exact combinatorics of chords, laminations and gaps under x -> d*x mod 1.

Angles are ``fractions.Fraction`` values reduced into [0, 1).  Nothing in
this module touches floating point.
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Angle = Fraction


class LaminationError(ValueError):
    """Invalid lamination input (crossing leaves, bad syntax, overlaps)."""


class GapError(ValueError):
    """A gap violates the hypotheses of a gap operation."""


def angle(x, q: int | None = None) -> Angle:
    """Coerce ``x`` (or ``x/q``) to an exact angle in [0, 1).

    Accepts ints, Fractions and strings like ``"3/8"``.  Floats are refused
    because they cannot represent most rational angles exactly.
    """
    if q is None and type(x) is Fraction and 0 <= x < 1:
        return x
    if isinstance(x, float) or isinstance(q, float):
        raise TypeError("angles must be exact rationals, not floats")
    if isinstance(x, str):
        x = Fraction(x.strip())
    v = Fraction(x) if q is None else Fraction(x, q)
    return v - (v.numerator // v.denominator)


@functools.lru_cache(maxsize=1 << 16)
def sigma(x: Angle, d: int = 3) -> Angle:
    """The d-tupling map on the circle."""
    return angle(d * Fraction(x))


def sigma_iter(x: Angle, d: int, n: int) -> Angle:
    return angle(d**n * Fraction(x))


def _open_arc_contains(a: Angle, b: Angle, x: Angle) -> bool:
    """x lies on the open counterclockwise arc from a to b."""
    if a < b:
        return a < x < b
    return x > a or x < b


@dataclass(frozen=True, order=True)
class Chord:
    """Unordered pair of angles, stored with ``a <= b``."""

    a: Angle
    b: Angle

    def __init__(self, a, b):
        a, b = angle(a), angle(b)
        if b < a:
            a, b = b, a
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def degenerate(self) -> bool:
        return self.a == self.b

    @property
    def endpoints(self) -> tuple[Angle, Angle]:
        return (self.a, self.b)

    def image(self, d: int = 3) -> "Chord":
        return Chord(sigma(self.a, d), sigma(self.b, d))

    def __str__(self):
        return f"{self.a}-{self.b}"

    def __repr__(self):
        return f"Chord({self.a}, {self.b})"


def chord(s: str) -> Chord:
    """Parse ``"p/q r/s"`` or ``"p/q-r/s"``."""
    parts = s.replace("-", " ").replace("–", " ").split()
    if len(parts) != 2:
        raise LaminationError(f"cannot parse chord {s!r}")
    return Chord(angle(parts[0]), angle(parts[1]))


def chords_cross(c1: Chord, c2: Chord) -> bool:
    """Open geodesics meet inside the disk.  Shared endpoints never cross."""
    if c1.degenerate or c2.degenerate:
        return False
    if len({c1.a, c1.b, c2.a, c2.b}) < 4:
        return False
    return _open_arc_contains(c1.a, c1.b, c2.a) != _open_arc_contains(c1.a, c1.b, c2.b)


def chords_disjoint(c1: Chord, c2: Chord) -> bool:
    """No common endpoint and no crossing (closed chords do not meet)."""
    if set(c1.endpoints) & set(c2.endpoints):
        return False
    return not chords_cross(c1, c2)


def is_critical(c: Chord, d: int = 3) -> bool:
    return not c.degenerate and sigma(c.a, d) == sigma(c.b, d)


@dataclass(frozen=True)
class Lamination:
    """Finite set of pairwise non-crossing leaves for the map sigma_d."""

    leaves: frozenset
    degree: int = 3

    def __init__(self, leaves: Iterable = (), degree: int = 3, validate: bool = True):
        if degree < 2:
            raise LaminationError("degree must be >= 2")
        ls = frozenset(c if isinstance(c, Chord) else Chord(*c) for c in leaves)
        object.__setattr__(self, "leaves", ls)
        object.__setattr__(self, "degree", int(degree))
        if validate:
            pair = first_crossing(ls)
            if pair is not None:
                raise LaminationError(f"leaves {pair[0]} and {pair[1]} cross")

    def __iter__(self):
        return iter(sorted(self.leaves))

    def __len__(self):
        return len(self.leaves)

    def nondegenerate(self) -> list[Chord]:
        return sorted(c for c in self.leaves if not c.degenerate)

    def image(self) -> "Lamination":
        return Lamination((c.image(self.degree) for c in self.leaves), self.degree, validate=False)

    def angles(self) -> list[Angle]:
        return sorted({x for c in self.leaves for x in c.endpoints})

    def to_text(self) -> str:
        lines = [f"d={self.degree}"]
        lines += [f"{c.a} {c.b}" for c in self]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Lamination":
        d = None
        leaves = []
        for n, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.replace(" ", "").startswith("d="):
                try:
                    d = int(line.replace(" ", "")[2:])
                except ValueError:
                    raise LaminationError(f"line {n}: bad degree header {raw!r}") from None
                continue
            try:
                leaves.append(chord(line))
            except (ValueError, ZeroDivisionError) as e:
                raise LaminationError(f"line {n}: {e}") from None
        if d is None:
            raise LaminationError("missing degree header 'd=<int>'")
        return cls(leaves, d)


def first_crossing(chords: Iterable[Chord]):
    cs = list(chords)
    for c1, c2 in itertools.combinations(cs, 2):
        if chords_cross(c1, c2):
            return c1, c2
    return None


# --------------------------------------------------------------------------
# sibling invariance


@dataclass
class Violation:
    condition: int
    leaf: Chord
    detail: str

    def to_dict(self):
        return {"condition": self.condition, "leaf": str(self.leaf), "detail": self.detail}


@dataclass
class SiblingReport:
    degree: int
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def failed_conditions(self) -> set[int]:
        return {v.condition for v in self.violations}

    def to_dict(self):
        return {
            "degree": self.degree,
            "passed": self.passed,
            "violations": [v.to_dict() for v in self.violations],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


@functools.lru_cache(maxsize=1 << 16)
def _preimages(x: Angle, d: int) -> tuple:
    return tuple(angle(x + k, d) for k in range(d))


def preimages(x: Angle, d: int) -> list[Angle]:
    return list(_preimages(x, d))


def preimage_demanded(c: Chord, d: int, max_den: int) -> bool:
    """Whether some sigma_d-preimage chord of ``c`` is visible at the data's scale.

    A finite leaf set cannot contain the whole backward orbit, so the preimage
    condition is only enforced when a candidate preimage leaf has both
    endpoint denominators no larger than the largest one present.
    """
    for x in _preimages(c.a, d):
        if x.denominator > max_den:
            continue
        for y in _preimages(c.b, d):
            if y.denominator <= max_den:
                return True
    return False


def _disjoint_family(target: Chord, pool: Sequence[Chord], k: int) -> list[Chord] | None:
    """Find ``k`` pairwise disjoint chords from ``pool`` that include ``target``."""
    chosen = [target]

    def rec(start):
        if len(chosen) == k:
            return True
        for i in range(start, len(pool)):
            c = pool[i]
            if c == target or not all(chords_disjoint(c, e) for e in chosen):
                continue
            chosen.append(c)
            if rec(i + 1):
                return True
            chosen.pop()
        return False

    return list(chosen) if rec(0) else None


def check_sibling_invariant(lam: Lamination) -> SiblingReport:
    """Check image closure (1), preimages (2) and d disjoint siblings (3).

    Degenerate leaves are implicitly present (every point of the circle is a
    degenerate leaf), so they are never reported missing.
    """
    d = lam.degree
    rep = SiblingReport(d)
    leaves = lam.nondegenerate()
    present = set(leaves)
    max_den = max((x.denominator for c in leaves for x in c.endpoints), default=1)
    by_image: dict[Chord, list[Chord]] = {}
    for c in leaves:
        by_image.setdefault(c.image(d), []).append(c)

    for c in leaves:
        img = c.image(d)
        if not img.degenerate and img not in present:
            rep.violations.append(Violation(1, c, f"image {img} is not a leaf"))
        if c not in by_image and preimage_demanded(c, d, max_den):
            rep.violations.append(Violation(2, c, "no leaf maps onto it"))
        if not img.degenerate:
            fam = _disjoint_family(c, by_image[img], d)
            if fam is None:
                rep.violations.append(
                    Violation(3, c, f"fewer than {d} disjoint leaves map onto {img}")
                )
    return rep


# --------------------------------------------------------------------------
# equivalence classes


@dataclass
class AxiomReport:
    degree: int
    status: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v in ("pass", "skipped") for v in self.status.values())

    def failed(self) -> list[str]:
        return [k for k, v in self.status.items() if v == "fail"]

    def to_dict(self):
        return {"degree": self.degree, "passed": self.passed, "status": self.status,
                "witnesses": self.witnesses}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def hulls_unlinked(A: Sequence[Angle], B: Sequence[Angle]) -> bool:
    """Convex hulls of two disjoint finite circle sets do not meet.

    Equivalent to all of B lying in one complementary arc of A.
    """
    A = sorted(A)
    if len(A) < 2 or len(B) < 2:
        return True
    import bisect

    arcs = {bisect.bisect(A, x) % len(A) for x in B}
    return len(arcs) == 1


def _successor(g: Sequence[Angle], x: Angle) -> Angle:
    g = sorted(g)
    i = g.index(x)
    return g[(i + 1) % len(g)]


def check_equivalence_axioms(classes: Sequence[Iterable], d: int = 3) -> AxiomReport:
    cls = [frozenset(angle(x) for x in c) for c in classes]
    seen: dict[Angle, int] = {}
    for i, c in enumerate(cls):
        if not c:
            raise LaminationError(f"class {i} is empty")
        for x in c:
            if x in seen:
                raise LaminationError(f"angle {x} lies in classes {seen[x]} and {i}")
            seen[x] = i
    rep = AxiomReport(d)
    rep.status["E1"] = "skipped"

    rep.status["E2"] = "pass"
    for i, j in itertools.combinations(range(len(cls)), 2):
        if not hulls_unlinked(cls[i], cls[j]):
            rep.status["E2"] = "fail"
            rep.witnesses["E2"] = [sorted(map(str, cls[i])), sorted(map(str, cls[j]))]
            break

    rep.status["E3"] = "pass"

    listed = set(cls)
    rep.status["D1"] = "pass"
    for c in cls:
        img = frozenset(sigma(x, d) for x in c)
        if img not in listed:
            rep.status["D1"] = "fail"
            rep.witnesses["D1"] = {"class": sorted(map(str, c)), "image": sorted(map(str, img))}
            break

    rep.status["D2"] = "pass"
    for c in cls:
        g = sorted(c)
        img = sorted({sigma(x, d) for x in g})
        if len(g) < 3 or len(img) < 2:
            continue
        ok = True
        for i in range(len(g)):
            a, b = g[i], g[(i + 1) % len(g)]
            if sigma(b, d) != _successor(img, sigma(a, d)):
                ok = False
                break
        if not ok:
            rep.status["D2"] = "fail"
            rep.witnesses["D2"] = {"class": [str(x) for x in g], "at": str(a)}
            break
    return rep


# --------------------------------------------------------------------------
# gaps


@dataclass(frozen=True)
class Gap:
    """A complementary face of a finite lamination.

    ``vertices`` run counterclockwise starting from the smallest angle.  The
    boundary piece from vertex i to vertex i+1 is either a leaf (listed in
    ``edges``) or a circle arc (listed in ``arcs``).  ``boundary_arcs`` maps
    each edge to the length of the circle arc it cuts off from the gap.
    """

    vertices: tuple
    edges: tuple
    boundary_arcs: dict
    arcs: tuple = ()

    @property
    def whole_disk(self) -> bool:
        return not self.vertices

    @classmethod
    def polygon(cls, vertices: Iterable) -> "Gap":
        """Finite polygonal gap: every side is an edge."""
        vs = tuple(sorted({angle(v) for v in vertices}))
        if len(vs) < 2:
            raise GapError("a polygonal gap needs at least two vertices")
        edges, H = [], {}
        for i, v in enumerate(vs):
            w = vs[(i + 1) % len(vs)]
            c = Chord(v, w)
            if len(vs) == 2 and c in H:
                continue
            edges.append(c)
            H[c] = angle(w - v) if w != v else Fraction(1)
        return cls(vs, tuple(edges), H)

    @classmethod
    def from_edges(cls, edge_lengths: dict) -> "Gap":
        """Gap given by its edges and their cut-off arc lengths."""
        H = {(e if isinstance(e, Chord) else Chord(*e)): Fraction(h) for e, h in edge_lengths.items()}
        vs = tuple(sorted({x for e in H for x in e.endpoints}))
        return cls(vs, tuple(sorted(H)), H)

    def to_dict(self):
        return {
            "vertices": [str(v) for v in self.vertices],
            "edges": [{"leaf": str(e), "H": str(self.boundary_arcs[e])} for e in self.edges],
            "arcs": [[str(a), str(b)] for a, b in self.arcs],
        }


# a face under construction: list of (vertex, kind of piece to next vertex)
_ARC, _LEAF = "arc", "leaf"


def _face_contains(face, x) -> int | None:
    """Index of vertex x, or -(i+1) when x is interior to the arc piece after i."""
    n = len(face)
    for i, (v, kind) in enumerate(face):
        if v == x:
            return i
    for i, (v, kind) in enumerate(face):
        w = face[(i + 1) % n][0]
        if kind == _ARC and (n == 1 or _open_arc_contains(v, w, x)):
            return -(i + 1)
    return None


def _insert_vertex(face, x):
    pos = _face_contains(face, x)
    if pos is None:
        return None
    if pos >= 0:
        return face, pos
    i = -pos - 1
    new = face[: i + 1] + [(x, _ARC)] + face[i + 1 :]
    return new, i + 1


def gaps(lam: Lamination) -> list[Gap]:
    """All complementary faces of the finite lamination, as Gaps."""
    pair = first_crossing(lam.leaves)
    if pair is not None:
        raise LaminationError(f"leaves {pair[0]} and {pair[1]} cross")
    chords = lam.nondegenerate()
    if not chords:
        return [Gap((), (), {}, ((Fraction(0), Fraction(1)),))]
    first = chords[0]
    faces = [
        [(first.a, _ARC), (first.b, _LEAF)],
        [(first.a, _LEAF), (first.b, _ARC)],
    ]
    for c in chords[1:]:
        for k, face in enumerate(faces):
            if _face_contains(face, c.a) is None or _face_contains(face, c.b) is None:
                continue
            face, _ = _insert_vertex(face, c.a)
            face, _ = _insert_vertex(face, c.b)
            ia = next(i for i, (v, _) in enumerate(face) if v == c.a)
            ib = next(i for i, (v, _) in enumerate(face) if v == c.b)
            n = len(face)
            # skip when the chord already bounds this face
            if (ib - ia) % n == 1 and face[ia][1] == _LEAF:
                continue
            if (ia - ib) % n == 1 and face[ib][1] == _LEAF:
                continue
            f1 = [face[(ia + j) % n] for j in range((ib - ia) % n + 1)]
            f2 = [face[(ib + j) % n] for j in range((ia - ib) % n + 1)]
            f1[-1] = (f1[-1][0], _LEAF)
            f2[-1] = (f2[-1][0], _LEAF)
            faces[k : k + 1] = [f1, f2]
            break
    return [_face_to_gap(f) for f in faces]


def _face_to_gap(face) -> Gap:
    k = min(range(len(face)), key=lambda i: face[i][0])
    face = face[k:] + face[:k]
    n = len(face)
    vs, edges, arcs, H = [], [], [], {}
    for i, (v, kind) in enumerate(face):
        w = face[(i + 1) % n][0]
        vs.append(v)
        if kind == _LEAF:
            c = Chord(v, w)
            edges.append(c)
            H[c] = angle(w - v) if v != w else Fraction(1)
        else:
            arcs.append((v, w))
    return Gap(tuple(vs), tuple(edges), H, tuple(arcs))


def _max_disjoint_critical(vs: Sequence[Angle], allowed) -> int:
    """Maximum number of pairwise disjoint chords among ``allowed`` index pairs.

    Non-crossing chords with distinct endpoints on points listed in circular
    order form a laminar family of intervals, so an interval DP suffices.
    """
    n = len(vs)
    partners = [[] for _ in range(n)]
    for i, j in allowed:
        partners[min(i, j)].append(max(i, j))
    M = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for j in range(i, n):
            best = M[i + 1][j] if i + 1 <= j else 0
            for k in partners[i]:
                if k > j:
                    continue
                inner = M[i + 1][k - 1] if i + 1 <= k - 1 else 0
                outer = M[k + 1][j] if k + 1 <= j else 0
                best = max(best, 1 + inner + outer)
            M[i][j] = best
    return M[0][n - 1] if n else 0


def critical_candidates(g: Gap, d: int) -> list[tuple[int, int]]:
    vs = list(g.vertices)
    edges = set(g.edges)
    out = []
    for i, j in itertools.combinations(range(len(vs)), 2):
        c = Chord(vs[i], vs[j])
        if is_critical(c, d) and c not in edges:
            out.append((i, j))
    return out


def gap_degree(g: Gap, d: int = 3) -> int:
    """Maximal number of disjoint interior critical chords, plus one.

    A triangle whose three edges are all critical has degree 3.  The
    whole-disk gap has degree d.
    """
    if g.whole_disk:
        return d
    vs = list(g.vertices)
    if len(vs) == 3 and all(is_critical(e, d) for e in g.edges) and len(g.edges) == 3:
        return 3
    return _max_disjoint_critical(vs, critical_candidates(g, d)) + 1


@dataclass(frozen=True)
class Major:
    leaf: Chord
    H: Fraction
    kind: str  # "regular-critical" or "periodic"
    period: int | None = None


def chord_period(c: Chord, d: int, bound: int | None = None) -> int | None:
    if bound is None:
        bound = max(c.a.denominator, c.b.denominator)
    x = c
    for k in range(1, bound + 1):
        x = x.image(d)
        if x == c:
            return k
    return None


def quadratic_gap_major(g: Gap, d: int = 3) -> Major:
    if not g.edges:
        raise GapError("gap has no edges")
    lengths = sorted(((g.boundary_arcs[e], e) for e in g.edges), reverse=True)
    top, leaf = lengths[0]
    if len(lengths) > 1 and lengths[1][0] == top:
        raise GapError(f"tie among longest edges: {leaf} and {lengths[1][1]}")
    if top < Fraction(1, 3):
        raise GapError(f"longest edge {leaf} cuts off only {top} < 1/3")
    if is_critical(leaf, d):
        return Major(leaf, top, "regular-critical")
    p = chord_period(leaf, d)
    if p is None:
        raise GapError(f"major {leaf} is neither critical nor periodic")
    return Major(leaf, top, "periodic", p)


def angle_period(x: Angle, d: int = 3) -> int | None:
    """Exact period of x under sigma_d, or None when x is strictly preperiodic."""
    y = x
    for k in range(1, x.denominator + 1):
        y = sigma(y, d)
        if y == x:
            return k
    return None
