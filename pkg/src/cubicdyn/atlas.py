"""Parameter-slice atlas: per-point labels, slice rendering, perturbation paths."""

from __future__ import annotations

import cmath
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction

import numpy as np
from PIL import Image
from PIL.PngImagePlugin import PngInfo

from . import cubic
from .cubic import BasinConfig, CubicParams, ProbeConfig

LABELS = ("Escape", "Principal", "IACapture", "OtherHyperbolic", "SiegelCaptureCandidate", "Unresolved")

# fixed palette; IACapture and SiegelCaptureCandidate are shaded by m resp. n (capped at 8)
SHADES = 8
_PALETTE = [(255, 255, 255), (40, 80, 220)]
_PALETTE += [(0, 230 - 18 * k, 40 + 6 * k) for k in range(SHADES)]
_PALETTE += [(128, 128, 128)]
_PALETTE += [(230 - 18 * k, 20 + 4 * k, 20 + 4 * k) for k in range(SHADES)]
_PALETTE += [(0, 0, 0)]
PALETTE = tuple(_PALETTE)


def palette_index(label: str, k: int | None = None) -> int:
    if label == "Escape":
        return 0
    if label == "Principal":
        return 1
    if label == "IACapture":
        return 2 + min(max(k or 1, 1), SHADES) - 1
    if label == "OtherHyperbolic":
        return 2 + SHADES
    if label == "SiegelCaptureCandidate":
        return 3 + SHADES + min(max(k or 1, 1), SHADES) - 1
    if label == "Unresolved":
        return 3 + 2 * SHADES
    raise ValueError(f"unknown label {label!r}")


def palette_doc() -> dict:
    """Index -> (label, shade, rgb); stored in every rendered PNG."""
    doc = {}
    for lab in LABELS:
        ks = range(1, SHADES + 1) if lab in ("IACapture", "SiegelCaptureCandidate") else [None]
        for k in ks:
            i = palette_index(lab, k)
            doc[str(i)] = {"label": lab, "k": k, "rgb": list(PALETTE[i])}
    return doc


@dataclass(frozen=True)
class AtlasConfig:
    basin: BasinConfig = BasinConfig()
    probe: ProbeConfig = ProbeConfig()
    unit_tol: float = 1e-9
    escape_iter: int = 1000


@dataclass
class Classification:
    label: str
    k: int | None = None  # m for IACapture, n for SiegelCaptureCandidate
    evidence: dict = field(default_factory=dict)

    def __str__(self):
        return f"{self.label}({self.k})" if self.k is not None else self.label

    def to_dict(self):
        return {"label": self.label, "k": self.k, "name": str(self), "evidence": _jsonable(self.evidence)}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, Fraction):
        return str(x)
    if hasattr(x, "to_dict"):
        return _jsonable(x.to_dict())
    return x


def _siegel(p: CubicParams, cfg: AtlasConfig) -> Classification:
    theta = (cmath.phase(p.lam) / (2 * math.pi)) % 1.0
    evs = []
    for which in (1, 2):
        ev = cubic.siegel_capture_probe(p, theta, cfg.probe, which=which)
        evs.append(ev)
    evidence = {"theta": theta, "probes": [e.to_dict() for e in evs]}
    if any(e.verdict == "escaped" for e in evs):
        return Classification("Escape", None, evidence)
    caught = [e for e in evs if e.verdict == "captured" and e.entry is not None]
    if caught:
        n = min(e.entry for e in caught)
        return Classification("SiegelCaptureCandidate", int(n), evidence)
    return Classification("Unresolved", None, evidence)


def classify_point(lam, b, cfg: AtlasConfig = AtlasConfig()) -> Classification:
    """Label of the map lam z + b z^2 + z^3; never raises on dynamical trouble."""
    p = CubicParams(lam, b)
    al = abs(p.lam)
    try:
        if abs(al - 1) <= cfg.unit_tol:
            return _siegel(p, cfg)
        if al > 1:
            rep = cubic.escape_classify(p, cfg.escape_iter)
            lab = "Escape" if rep.status != "both-bounded" else "Unresolved"
            return Classification(lab, None, {"escape": rep.to_dict()})
        res = cubic.classify_hyperbolic(p, cfg.basin)
    except (cubic.UnresolvedError, ArithmeticError, ValueError) as e:
        return Classification("Unresolved", None, {"error": str(e)})
    ev = res.to_dict()
    if res.evidence.get("escape"):
        return Classification("Escape", None, ev)
    if res.label == "IACapture":
        return Classification("IACapture", res.m, ev)
    return Classification(res.label, None, ev)


# --------------------------------------------------------------------------
# slices


@dataclass(frozen=True)
class SliceSpec:
    lam: complex
    window: tuple  # (x0, x1, y0, y1) in the b-plane
    resolution: tuple  # (width, height)
    cfg: AtlasConfig = AtlasConfig()

    def __post_init__(self):
        x0, x1, y0, y1 = map(float, self.window)
        w, h = map(int, self.resolution)
        if not (x1 > x0 and y1 > y0):
            raise ValueError("slice window has zero or negative area")
        if w <= 0 or h <= 0:
            raise ValueError("resolution must be positive")
        object.__setattr__(self, "lam", complex(self.lam))
        object.__setattr__(self, "window", (x0, x1, y0, y1))
        object.__setattr__(self, "resolution", (w, h))

    def pixel_center(self, i: int, j: int) -> complex:
        x0, x1, y0, y1 = self.window
        w, h = self.resolution
        return complex(x0 + (j + 0.5) * (x1 - x0) / w, y1 - (i + 0.5) * (y1 - y0) / h)

    @classmethod
    def from_json(cls, text: str) -> "SliceSpec":
        d = json.loads(text)
        lam = d["lambda"]
        lam = complex(*lam) if isinstance(lam, list) else complex(lam)
        budgets = d.get("budgets", {})
        basin = replace(BasinConfig(), **{k: v for k, v in budgets.items() if k in BasinConfig.__dataclass_fields__})
        return cls(lam, tuple(d["window"]), tuple(d["resolution"]), AtlasConfig(basin=basin))


def _detail(c: Classification) -> str:
    ev = c.evidence.get("evidence", {}) if isinstance(c.evidence, dict) else {}
    fates = ev.get("critical_fates")
    if fates:
        return "/".join(f"{f['fate'][0]}{f['iterations']}" for f in fates)
    return ""


def _render_row(args):
    spec, i = args
    out = []
    for j in range(spec.resolution[0]):
        b = spec.pixel_center(i, j)
        c = classify_point(spec.lam, b, spec.cfg)
        out.append((b, c.label, c.k, _detail(c)))
    return out


@dataclass
class SliceResult:
    spec: SliceSpec
    index: np.ndarray  # palette indices, shape (height, width)
    rows: list  # (b, label, k, detail)

    def counts(self) -> dict:
        out: dict = {}
        for _, lab, k, _ in self.rows:
            key = f"{lab}({k})" if k is not None else lab
            out[key] = out.get(key, 0) + 1
        return dict(sorted(out.items()))

    def png_bytes(self) -> bytes:
        img = Image.fromarray(self.index.astype(np.uint8), mode="P")
        flat = [v for rgb in PALETTE for v in rgb]
        img.putpalette(flat + [0] * (768 - len(flat)))
        info = PngInfo()
        info.add_text("palette", json.dumps(palette_doc(), sort_keys=True))
        x0, x1, y0, y1 = self.spec.window
        info.add_text("slice", json.dumps({"lambda": [self.spec.lam.real, self.spec.lam.imag],
                                           "window": [x0, x1, y0, y1],
                                           "resolution": list(self.spec.resolution)}))
        buf = io.BytesIO()
        img.save(buf, format="PNG", pnginfo=info)
        return buf.getvalue()

    def csv_text(self) -> str:
        lines = ["re_b,im_b,label,k,detail"]
        for b, lab, k, det in self.rows:
            lines.append(f"{b.real!r},{b.imag!r},{lab},{'' if k is None else k},{det}")
        return "\n".join(lines) + "\n"

    def write(self, prefix: str):
        for ext, data in ((".png", self.png_bytes()), (".csv", self.csv_text().encode())):
            path = prefix + ext
            try:
                with open(path, "wb") as fh:
                    fh.write(data)
            except OSError as e:
                raise OSError(f"cannot write {path}: {e}") from e


def render_slice(spec: SliceSpec, workers: int = 1, out_prefix: str | None = None) -> SliceResult:
    """Classify every pixel center; rows are farmed out to worker processes.

    Each pixel is a pure function of (lambda, b, cfg) and results are
    reassembled in row order, so the output does not depend on ``workers``.
    """
    w, h = spec.resolution
    jobs = [(spec, i) for i in range(h)]
    if workers <= 1:
        rows = [_render_row(a) for a in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(_render_row, jobs, chunksize=max(1, h // (4 * workers))))
    flat = [r for row in rows for r in row]
    index = np.array([[palette_index(lab, k) for _, lab, k, _ in row] for row in rows], np.uint8)
    res = SliceResult(spec, index, flat)
    if out_prefix:
        res.write(out_prefix)
    return res


# --------------------------------------------------------------------------
# perturbation paths


@dataclass
class PathReport:
    base: CubicParams
    rungs: list
    stabilized: bool
    label: str | None
    k: int | None
    tail_start: float | None
    roles: dict
    lamination_constant: bool | None
    lamination_tail: list | None = None

    def to_dict(self):
        return _jsonable({"base": self.base.to_dict(), "rungs": self.rungs, "stabilized": self.stabilized,
                          "label": self.label, "k": self.k, "tail_start_eps": self.tail_start,
                          "roles": self.roles, "lamination_constant": self.lamination_constant,
                          "lamination_tail": self.lamination_tail})


def perturbation_path_report(base: CubicParams, eps_ladder, cfg: AtlasConfig = AtlasConfig(),
                             min_tail: int = 3, lamination_q: int = 0) -> PathReport:
    """Classify f_eps along a decreasing ladder and report the label the tail settles on.

    The base critical points are labelled re / ca by the capture probe; each
    rung's critical points are matched to them by nearest-root continuation,
    so the report says which base critical point ends up in the basin of 0.
    """
    eps = [float(e) for e in eps_ladder]
    if not eps:
        raise ValueError("empty ladder")
    if any(not 0 < e < 1 for e in eps) or any(a <= b for a, b in zip(eps, eps[1:])):
        raise ValueError("ladder must be strictly decreasing inside (0, 1)")
    if abs(abs(base.lam) - 1) > cfg.unit_tol:
        raise ValueError("base multiplier must lie on the unit circle")
    base_cp = tuple(cubic.critical_points(base))
    names = {}
    theta = (cmath.phase(base.lam) / (2 * math.pi)) % 1.0
    for i, c in enumerate(base_cp):
        ev = cubic.siegel_capture_probe(base, theta, cfg.probe, which=i + 1)
        names[f"c{i + 1}"] = {"point": [c.real, c.imag], "probe": ev.verdict, "entry": ev.entry}
    caught = [k for k, v in names.items() if v["probe"] == "captured"]
    if len(caught) == 1:
        for k in names:
            names[k]["role"] = "ca" if k == caught[0] else "re"
    rungs = []
    prev = base_cp
    for e in eps:
        q = cubic.perturb(base, e)
        res = cubic.classify_hyperbolic(q, cfg.basin)
        cur = (res.critical.c1, res.critical.c2)
        order = cubic.match_roots(base_cp, cur)
        roles = res.critical.roles or {}
        idx = {cur[0]: "c1", cur[1]: "c2"}
        inherited = {f"c{i + 1}": roles.get(idx[order[i]]) for i in range(2)}
        rungs.append({"eps": e, "label": res.label, "k": res.m, "name": str(res), "roles": inherited})
        prev = cur
    tail = 1
    while tail < len(rungs) and rungs[-tail - 1]["name"] == rungs[-1]["name"]:
        tail += 1
    last = rungs[-1]
    stabilized = tail >= min(min_tail, len(rungs)) and last["label"] in ("Principal", "IACapture")
    role_map = {}
    if stabilized:
        for k in ("c1", "c2"):
            role_map[k] = {"base_role": names[k].get("role"), "in_basin_role": last["roles"].get(k),
                           "probe": names[k]["probe"]}
    lam_const, lam_tail = None, None
    if lamination_q > 0 and stabilized:
        from . import rays

        lam_tail = []
        for r in rungs[-tail:]:
            q = cubic.perturb(base, r["eps"])
            lam_tail.append(sorted(str(c) for c in rays.rational_lamination_sample(q, lamination_q).leaves))
        lam_const = all(t == lam_tail[0] for t in lam_tail)
    return PathReport(base, rungs, stabilized, last["label"] if stabilized else None,
                      last["k"] if stabilized else None, rungs[-tail]["eps"] if stabilized else None,
                      role_map, lam_const, lam_tail)


# --------------------------------------------------------------------------
# annuli


@dataclass(frozen=True)
class Annulus:
    r: float
    R: float

    def __post_init__(self):
        if not (self.r > 0 and self.R > self.r and math.isfinite(self.R)):
            raise ValueError(f"need 0 < r < R, got r={self.r}, R={self.R}")


def annulus_modulus(A: Annulus) -> float:
    """(ln R - ln r) / 2 pi."""
    return math.log(A.R / A.r) / (2 * math.pi)


def modulus_le(A: Annulus, B: Annulus) -> bool:
    """mod A <= mod B decided exactly, by comparing R/r as rationals."""
    return Fraction(A.R) * Fraction(B.r) <= Fraction(B.R) * Fraction(A.r)


def nested(inner: Annulus, outer: Annulus) -> bool:
    return outer.r <= inner.r and inner.R <= outer.R
