import cmath
import io
import json
import math
import os

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from PIL import Image

from cubicdyn import atlas, brjuno, cubic
from cubicdyn.atlas import Annulus, SliceSpec
from cubicdyn.cubic import CubicParams

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")
THETA = float(brjuno.golden_mean(64))
LAM_GOLDEN = cmath.exp(2j * math.pi * THETA)
IS3 = CubicParams(LAM_GOLDEN, -0.9271633283731737 - 0.34784937467173893j)
LADDER = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6]


# ---------------------------------------------------------------- point labels


def test_classify_examples():
    assert str(atlas.classify_point(0.5, 0)) == "Principal"
    assert atlas.classify_point(0.5, 10).label in ("Escape", "OtherHyperbolic")
    assert str(atlas.classify_point(0, 0)) == "Principal"
    assert str(atlas.classify_point(IS3.lam, IS3.b)) == "SiegelCaptureCandidate(3)"


def test_classify_repelling_multiplier():
    assert atlas.classify_point(1.5, 10).label == "Escape"
    assert atlas.classify_point(1.5, 0.1).label in ("Escape", "Unresolved")


def test_siegel_label_needs_unit_circle():
    c = atlas.classify_point((1 - 1e-6) * IS3.lam, IS3.b)
    assert c.label != "SiegelCaptureCandidate"


def test_classify_is_pure():
    a = atlas.classify_point(0.5, 2.2437490787133227j).to_dict()
    b = atlas.classify_point(0.5, 2.2437490787133227j).to_dict()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["name"] == "IACapture(2)"


# ---------------------------------------------------------------- palette and slices


def test_palette_golden():
    with open(os.path.join(GOLDEN, "palette.json")) as fh:
        want = json.load(fh)
    assert atlas.palette_doc() == want
    assert atlas.PALETTE[atlas.palette_index("Escape")] == (255, 255, 255)
    assert atlas.PALETTE[atlas.palette_index("Unresolved")] == (0, 0, 0)
    assert atlas.PALETTE[atlas.palette_index("OtherHyperbolic")] == (128, 128, 128)
    r, g, b = atlas.PALETTE[atlas.palette_index("Principal")]
    assert b > max(r, g)
    r, g, b = atlas.PALETTE[atlas.palette_index("IACapture", 3)]
    assert g > max(r, b)
    r, g, b = atlas.PALETTE[atlas.palette_index("SiegelCaptureCandidate", 3)]
    assert r > max(g, b)
    with pytest.raises(ValueError):
        atlas.palette_index("Cremer")


def test_slice_spec_validation():
    with pytest.raises(ValueError):
        SliceSpec(0.5, (0, 0, -1, 1), (4, 4))
    with pytest.raises(ValueError):
        SliceSpec(0.5, (-1, 1, -1, 1), (0, 4))
    s = SliceSpec.from_json('{"lambda": [0.5, 0], "window": [-1, 1, -1, 1], "resolution": [4, 2],'
                            ' "budgets": {"grid": 65}}')
    assert s.cfg.basin.grid == 65 and s.resolution == (4, 2)


def test_pixel_centers():
    s = SliceSpec(0, (-1, 1, -1, 1), (2, 2))
    assert s.pixel_center(0, 0) == complex(-0.5, 0.5)
    assert s.pixel_center(1, 1) == complex(0.5, -0.5)


def test_small_slice_outputs(tmp_path):
    spec = SliceSpec(0, (-0.5, 0.5, -0.5, 0.5), (3, 3))
    res = atlas.render_slice(spec, out_prefix=str(tmp_path / "s"))
    # the middle pixel is b = 0
    assert res.rows[4][0] == 0 and res.rows[4][1] == "Principal"
    img = Image.open(tmp_path / "s.png")
    assert img.mode == "P" and img.size == (3, 3)
    assert json.loads(img.text["palette"]) == atlas.palette_doc()
    lines = (tmp_path / "s.csv").read_text().splitlines()
    assert lines[0] == "re_b,im_b,label,k,detail"
    assert len(lines) == 10
    assert (tmp_path / "s.png").read_bytes() == res.png_bytes()


def test_write_error_has_path(tmp_path):
    res = atlas.render_slice(SliceSpec(0, (-0.5, 0.5, -0.5, 0.5), (1, 1)))
    bad = str(tmp_path / "missing" / "x")
    with pytest.raises(OSError, match="missing"):
        res.write(bad)


def test_slice_snapshot():
    with open(os.path.join(GOLDEN, "slice_lambda05_256.json")) as fh:
        snap = json.load(fh)
    res = atlas.render_slice(SliceSpec(0.5, tuple(snap["window"]), tuple(snap["resolution"])))
    assert res.counts() == snap["counts"]
    # central Principal region, escape outside
    h, w = res.index.shape
    assert res.index[h // 2, w // 2] == atlas.palette_index("Principal")
    assert res.index[0, 0] == atlas.palette_index("Escape")


def test_png_roundtrip_indices():
    res = atlas.render_slice(SliceSpec(0.5, (-3, 3, -3, 3), (16, 16)))
    img = Image.open(io.BytesIO(res.png_bytes()))
    assert np.array_equal(np.array(img), res.index)


# ---------------------------------------------------------------- perturbation paths


def test_path_from_siegel_capture():
    rep = atlas.perturbation_path_report(IS3, LADDER)
    assert rep.stabilized
    assert (rep.label, rep.k) == ("IACapture", 3)
    # the captured critical point is the one that leaves the basin of 0
    roles = {v["probe"]: v["in_basin_role"] for v in rep.roles.values()}
    assert roles["captured"] == "omega2"


def test_path_to_principal():
    # f(c) = 0 at the golden rotation: the critical value is 0 itself
    base = CubicParams(LAM_GOLDEN, 0.7247497801609606 - 1.8640648476264559j)
    rep = atlas.perturbation_path_report(base, LADDER)
    assert rep.stabilized and rep.label == "Principal"


def test_path_input_errors():
    with pytest.raises(ValueError):
        atlas.perturbation_path_report(IS3, [])
    with pytest.raises(ValueError):
        atlas.perturbation_path_report(IS3, [1e-3, 1e-2])
    with pytest.raises(ValueError):
        atlas.perturbation_path_report(CubicParams(0.5, 0), [1e-2])


@pytest.mark.slow
def test_path_lamination_is_constant():
    rep = atlas.perturbation_path_report(IS3, LADDER[:4], lamination_q=6)
    assert rep.lamination_constant


def test_basin_disk_membership_stabilizes():
    """A disk around 0 inside the Siegel lower bound stays in the basin down the ladder."""
    lin = cubic.siegel_lower_bound(IS3.lam, IS3.b)
    assert lin.ok
    r = 0.5 * lin.r_in
    pts = [r * cmath.exp(2j * math.pi * k / 16) for k in range(16)] + [0.5 * r]
    member = []
    for e in LADDER:
        q = cubic.perturb(IS3, e)
        member.append(all(cubic.basin_membership(q, z) for z in pts))
    first = member.index(True)
    assert all(member[first:])


# ---------------------------------------------------------------- annuli


def test_annulus_examples():
    assert abs(atlas.annulus_modulus(Annulus(1, math.exp(2 * math.pi))) - 1) < 1e-15
    assert atlas.annulus_modulus(Annulus(2, 4)) == atlas.annulus_modulus(Annulus(3, 6))
    for r, R in ((1, 1), (2, 1), (0, 1), (-1, 2)):
        with pytest.raises(ValueError):
            Annulus(r, R)


@given(st.floats(1e-3, 1e3), st.floats(1.0001, 1e3), st.floats(1e-3, 1e3))
def test_modulus_scale_invariant(r, ratio, k):
    A = Annulus(r, r * ratio)
    B = Annulus(k * r, k * r * ratio)
    assert abs(atlas.annulus_modulus(A) - atlas.annulus_modulus(B)) < 1e-13


@given(st.floats(0.01, 10), st.floats(1.01, 10), st.floats(0.01, 1), st.floats(1, 10))
def test_modulus_monotone_under_nesting(r, ratio, shrink, grow):
    inner = Annulus(r, r * ratio)
    outer = Annulus(r * shrink, r * ratio * grow)
    assert atlas.nested(inner, outer)
    assert atlas.modulus_le(inner, outer)
    assert atlas.annulus_modulus(inner) <= atlas.annulus_modulus(outer) + 1e-15
