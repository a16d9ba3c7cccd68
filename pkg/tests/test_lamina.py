import functools
import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubicdyn.lamina import (
    Chord, Gap, GapError, Lamination, LaminationError, angle, angle_period, check_equivalence_axioms,
    check_sibling_invariant, chord, chords_cross, chords_disjoint, gap_degree, gaps, is_critical,
    quadratic_gap_major, sigma,
)
from oracles import (
    all_angles, all_chords, cross_oracle, face_count_oracle, gap_degree_oracle, noncrossing_families,
    sibling_oracle,
)

angles26 = st.sampled_from(all_angles(26))
rationals = st.builds(lambda p, q: F(p % q, q), st.integers(0, 10**6), st.integers(1, 10**4))


def lam(*leaves, d=3):
    return Lamination([chord(s) for s in leaves], d)


# ---------------------------------------------------------------- angles and chords


def test_angle_parsing():
    assert angle("3/8") == F(3, 8)
    assert angle(5, 4) == F(1, 4)
    assert angle(F(-1, 3)) == F(2, 3)
    with pytest.raises(TypeError):
        angle(0.25)


@pytest.mark.parametrize("x,d,y", [(0, 3, 0), (F(1, 4), 3, F(3, 4)), (F(2, 3), 3, 0)])
def test_sigma_examples(x, d, y):
    assert sigma(angle(x), d) == y


@given(rationals, rationals, st.integers(2, 7))
def test_sigma_is_additive(x, y, d):
    assert sigma(angle(x + y), d) == angle(sigma(angle(x), d) + sigma(angle(y), d))


@pytest.mark.parametrize("c1,c2,want", [
    ("0 1/2", "1/4 3/4", True),
    ("0 1/4", "1/2 3/4", False),
    ("0 1/2", "1/2 3/4", False),
])
def test_cross_examples(c1, c2, want):
    assert chords_cross(chord(c1), chord(c2)) is want


@given(angles26, angles26, angles26, angles26)
def test_cross_matches_oracle(a, b, c, d):
    c1, c2 = Chord(a, b), Chord(c, d)
    assert chords_cross(c1, c2) == chords_cross(c2, c1)
    assert not chords_cross(c1, c1)
    assert chords_cross(c1, c2) == cross_oracle(c1.endpoints, c2.endpoints)


def test_cross_exhaustive_small():
    ch = all_chords(10)
    for x, y in itertools.combinations(ch, 2):
        assert chords_cross(Chord(*x), Chord(*y)) == cross_oracle(x, y)


@pytest.mark.parametrize("c,d,want", [("0 1/3", 3, True), ("0 1/2", 3, False), ("0 1/2", 2, True),
                                      ("1/4 1/4", 3, False)])
def test_is_critical(c, d, want):
    assert is_critical(chord(c), d) is want


def test_chord_canonical_order():
    assert Chord(F(1, 2), F(1, 4)) == Chord(F(1, 4), F(1, 2))
    assert chord("1/2 1/4").a == F(1, 4)


def test_disjoint_needs_distinct_endpoints():
    assert not chords_disjoint(chord("0 1/3"), chord("1/3 2/3"))
    assert chords_disjoint(chord("0 1/3"), chord("1/2 5/6"))


# ---------------------------------------------------------------- lamination IO


def test_text_roundtrip():
    L = lam("0 1/2", "1/6 1/3", "2/3 5/6")
    assert Lamination.from_text(L.to_text()) == L
    text = "# a comment\nd=3\n0 1/2   # fixed leaf\n\n1/6 1/3\n"
    assert len(Lamination.from_text(text)) == 2


def test_text_errors():
    with pytest.raises(LaminationError):
        Lamination.from_text("0 1/2\n")
    with pytest.raises(LaminationError):
        Lamination.from_text("d=3\n0 x/2\n")
    with pytest.raises(LaminationError):
        Lamination.from_text("d=3\n0 1/2\n1/4 3/4\n")


# ---------------------------------------------------------------- sibling invariance


def test_sibling_examples():
    assert check_sibling_invariant(Lamination([], 3)).passed
    assert check_sibling_invariant(lam("0 1/2", "1/6 1/3", "2/3 5/6")).passed
    rep = check_sibling_invariant(lam("1/6 1/3"))
    assert 1 in rep.failed_conditions()
    assert rep.violations[0].leaf == chord("1/6 1/3")


def test_sibling_report_json():
    import json

    d = json.loads(check_sibling_invariant(lam("1/6 1/3")).to_json())
    assert d["passed"] is False
    assert {v["condition"] for v in d["violations"]} >= {1}


@functools.lru_cache(maxsize=None)
def small_families():
    """Every family of <= 3 non-crossing chords with denominators <= 6, with oracle verdicts."""
    return [(fam, frozenset(sibling_oracle(fam))) for fam in noncrossing_families(all_chords(6), 3)]


def sibling_invariant_examples():
    return [fam for fam, failed in small_families() if fam and not failed]


def test_sibling_exhaustive_small():
    for fam, failed in small_families():
        rep = check_sibling_invariant(Lamination([Chord(*c) for c in fam]))
        assert rep.failed_conditions() == failed, fam
    assert len(sibling_invariant_examples()) > 1


@st.composite
def laminations(draw, qmax=26, kmax=5):
    pool = all_chords(qmax)
    idx = draw(st.lists(st.integers(0, len(pool) - 1), max_size=kmax, unique=True))
    out = []
    for i in idx:
        c = pool[i]
        if all(not cross_oracle(c, e) for e in out):
            out.append(c)
    return out


@given(laminations())
def test_sibling_matches_oracle_random(fam):
    rep = check_sibling_invariant(Lamination([Chord(*c) for c in fam]))
    assert rep.failed_conditions() == sibling_oracle(fam)


def test_image_of_invariant_lamination_is_closed():
    for fam in sibling_invariant_examples():
        L = Lamination([Chord(*c) for c in fam])
        img = L.image()
        assert 1 not in check_sibling_invariant(img).failed_conditions()


def shared_periodic_endpoints_ok(leaves) -> bool:
    """Leaves meeting at a periodic angle have endpoints of the same exact period."""
    for c1, c2 in itertools.combinations(leaves, 2):
        for x in set(c1.endpoints) & set(c2.endpoints):
            p = angle_period(x)
            if p is None:
                continue
            for c in (c1, c2):
                if angle_period(c.b if c.a == x else c.a) != p:
                    return False
    return True


def test_periodic_endpoints_share_period():
    # rays landing at a repelling periodic point are all periodic, so this
    # finite form concerns laminations without critical leaves; the critical
    # triangle 0, 1/3, 2/3 is sibling invariant only vacuously
    tested = 0
    for fam in sibling_invariant_examples():
        leaves = [Chord(*c) for c in fam]
        if any(is_critical(c) for c in leaves):
            continue
        assert shared_periodic_endpoints_ok(leaves), fam
        tested += 1
    assert tested > 0
    assert not shared_periodic_endpoints_ok([chord("0 1/3"), chord("0 2/3")])


# ---------------------------------------------------------------- equivalence axioms


def test_axioms_examples():
    assert check_equivalence_axioms([[0], [F(1, 2)]]).passed
    r = check_equivalence_axioms([[0, F(1, 2)]])
    assert r.passed and r.status["E1"] == "skipped"
    r = check_equivalence_axioms([[0, F(1, 4)], [F(1, 2), F(3, 4)]])
    assert r.status["D1"] == "fail"


def test_axioms_linked_hulls_and_overlap():
    r = check_equivalence_axioms([[0, F(1, 2)], [F(1, 4), F(3, 4)]])
    assert r.status["E2"] == "fail"
    with pytest.raises(LaminationError):
        check_equivalence_axioms([[0, F(1, 2)], [F(1, 2), F(3, 4)]])


def test_axioms_order_preservation():
    # a class collapsing to one point: the order check is vacuous
    assert check_equivalence_axioms([[0, F(1, 3), F(2, 3)]]).status["D2"] == "pass"
    # period-3 triangle rotated onto itself in order
    r = check_equivalence_axioms([[F(1, 13), F(3, 13), F(9, 13)]])
    assert r.passed
    # 0, 1/4, 1/2 go to 0, 3/4, 1/2: circular order reversed
    r = check_equivalence_axioms([[0, F(1, 4), F(1, 2)]])
    assert r.status["D2"] == "fail"


# ---------------------------------------------------------------- gaps


def test_gaps_examples():
    g = gaps(Lamination([]))
    assert len(g) == 1 and g[0].whole_disk and not g[0].edges
    g = gaps(lam("0 1/2"))
    assert len(g) == 2
    assert {tuple(x.vertices) for x in g} == {(0, F(1, 2))}
    assert sorted(x.boundary_arcs[chord("0 1/2")] for x in g) == [F(1, 2), F(1, 2)]
    assert len(gaps(lam("0 1/2", "1/6 1/3", "2/3 5/6"))) == 4
    with pytest.raises(LaminationError):
        gaps(Lamination([chord("0 1/2"), chord("1/4 3/4")], validate=False))


@given(laminations(qmax=16, kmax=8))
def test_gap_count_matches_arrangement(fam):
    G = gaps(Lamination([Chord(*c) for c in fam]))
    assert len(G) == len(fam) + 1 == face_count_oracle(fam)
    # every leaf bounds exactly two gaps, arcs tile the circle
    assert sum(len(g.edges) for g in G) == 2 * len(fam)
    total = sum(((b - a) % 1 or 1) for g in G for a, b in g.arcs)
    assert total == 1


@given(laminations(qmax=16, kmax=6))
def test_gap_vertices_increase(fam):
    for g in gaps(Lamination([Chord(*c) for c in fam])):
        assert list(g.vertices) == sorted(g.vertices)
        assert len(set(g.vertices)) == len(g.vertices)


def test_gap_degree_examples():
    assert gap_degree(gaps(Lamination([]))[0], 3) == 3
    assert gap_degree(Gap.polygon([0, F(1, 3), F(2, 3)]), 3) == 3
    assert gap_degree(Gap.polygon([0, F(1, 10), F(1, 2), F(6, 10)]), 3) == 1


def random_polygon(rng, kmax=12):
    q = rng.choice([3, 6, 9, 12, 15, 18, 24, 27, 36, 7, 10])
    k = rng.randint(2, min(kmax, q))
    return sorted(F(a, q) for a in rng.sample(range(q), k))


def test_gap_degree_matches_subset_search():
    rng = random.Random(7)
    for _ in range(300):
        vs = random_polygon(rng)
        g = Gap.polygon(vs)
        want = gap_degree_oracle(vs, [e.endpoints for e in g.edges])
        assert gap_degree(g, 3) == want
        assert gap_degree(g, 3) <= 3


# ---------------------------------------------------------------- majors


def test_major_examples():
    g = Gap.from_edges({("0", "1/2"): F(1, 2), ("1/2", "2/3"): F(1, 6),
                        ("2/3", "5/6"): F(1, 6), ("5/6", "0"): F(1, 6)})
    m = quadratic_gap_major(g)
    assert m.leaf == chord("0 1/2") and m.kind == "periodic" and m.period == 1
    g = Gap.from_edges({("1/3", "2/3"): F(1, 3), ("2/3", "5/6"): F(1, 6)})
    m = quadratic_gap_major(g)
    assert m.leaf == chord("1/3 2/3") and m.kind == "regular-critical"


def test_major_errors():
    with pytest.raises(GapError):
        quadratic_gap_major(Gap.from_edges({("0", "1/4"): F(1, 4), ("1/2", "3/4"): F(1, 4)}))
    with pytest.raises(GapError):
        quadratic_gap_major(Gap.from_edges({("0", "1/4"): F(1, 4), ("1/2", "3/4"): F(1, 5)}))


def test_major_of_basin_gap():
    """The invariant gap of the fixed leaf 0-1/2 with its siblings."""
    G = gaps(lam("0 1/2", "1/6 1/3", "2/3 5/6"))
    side = next(g for g in G if F(2, 3) in g.vertices and len(g.edges) == 2)
    assert gap_degree(side, 3) == 2
    m = quadratic_gap_major(side)
    assert m.leaf == chord("0 1/2")
    assert m.H == F(1, 2)
