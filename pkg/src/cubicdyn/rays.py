"""External rays of f(z) = lam z + b z^2 + z^3 through the Boettcher coordinate.

phi(z) = z * prod_k (1 + b/z_k + lam/z_k^2)^(1/3^(k+1)),  z_k = f^k(z),
is the coordinate at infinity tangent to the identity, with
phi(f(z)) = phi(z)^3.  The point of potential t on the ray of angle theta
solves f^n(z) = phi^{-1}(exp(3^n t + 2 pi i sigma^n(theta))) for any n;
n is chosen so that the right side is far out, where phi^{-1} is easy.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from . import lamina
from .cubic import CubicParams, DomainError, derivative, escape_classify, escape_radius, evaluate
from .lamina import Angle, Chord, Lamination, LaminationError, angle, sigma_iter


@dataclass(frozen=True)
class RayConfig:
    ratio: float = 0.85  # potential step factor
    t_min: float = 1e-6
    land_potential: float = 1e-4  # periodic rays are traced to land_potential / 3^period
    far: float = 1e4  # |phi| at which phi^{-1} is evaluated directly
    newton_tol: float = 1e-12
    newton_iter: int = 60
    min_step_ratio: float = 0.999  # refine steps down to this factor before giving up
    t_floor: float = 1e-12  # deepest potential used when a landing needs more tail
    deepen: float = 1e-2
    landing_tol: float = 1e-10
    parabolic_tol: float = 1e-6
    escape_iter: int = 2000
    hp_prec: int = 160


@dataclass
class ExternalRay:
    angle: Angle
    points: np.ndarray
    potentials: np.ndarray
    ok: bool = True
    reason: str = ""

    def to_csv(self) -> str:
        rows = ["potential,re,im"]
        rows += [f"{float(t)!r},{float(z.real)!r},{float(z.imag)!r}" for t, z in zip(self.potentials, self.points)]
        return "\n".join(rows) + "\n"


@dataclass
class LandingRecord:
    angle: Angle
    landing_point: complex
    period: int  # period of the landing cycle
    multiplier: complex  # of the landing cycle
    preperiod: int = 0
    residual: float = 0.0
    status: str = "ok"  # ok | parabolic-suspect | unresolved
    ray_ok: bool = True
    landing_point_hp: object = None  # mpmath value when the residual needed extra precision

    @property
    def flagged(self) -> bool:
        return self.status != "ok"

    def to_dict(self):
        return {"angle": str(self.angle), "landing_point": [self.landing_point.real, self.landing_point.imag],
                "period": self.period, "preperiod": self.preperiod,
                "multiplier": [self.multiplier.real, self.multiplier.imag],
                "multiplier_abs": abs(self.multiplier), "residual": self.residual,
                "status": self.status}


def boettcher(p: CubicParams, z: complex, max_terms: int = 200) -> complex:
    """phi(z) by the product formula (valid for |z| well outside the filled Julia set)."""
    w = complex(z)
    zk = complex(z)
    e = 1.0 / 3
    for _ in range(max_terms):
        u = p.b / zk + p.lam / (zk * zk)
        if abs(u) < 1e-18:
            break
        w *= (1 + u) ** e
        zk = evaluate(p, zk)
        e /= 3
        if abs(zk) > 1e150:
            break
    return w


def boettcher_inverse(p: CubicParams, W: complex) -> complex:
    """Solve phi(u) = W for large |W| (phi is close to the identity there)."""
    u = W - p.b / 3
    for _ in range(100):
        d = boettcher(p, u) - W
        u -= d
        if abs(d) < 1e-15 * abs(W):
            break
    return u


def _newton_iterate(p: CubicParams, z: complex, n: int, target: complex, cfg: RayConfig):
    """Newton for f^n(z) = target starting at z."""
    for _ in range(cfg.newton_iter):
        w, dw = z, 1 + 0j
        for _ in range(n):
            dw *= derivative(p, w)
            w = evaluate(p, w)
        if dw == 0 or not cmath.isfinite(w):
            return z, False
        dz = (w - target) / dw
        z -= dz
        if abs(dz) <= cfg.newton_tol * (1 + abs(z)):
            return z, True
    return z, False


def ray_point(p: CubicParams, theta: Angle, t: float, guess: complex, cfg: RayConfig):
    n = max(0, math.ceil(math.log(math.log(cfg.far) / t, 3))) if t < math.log(cfg.far) else 0
    th = sigma_iter(theta, 3, n)
    W = cmath.exp(3**n * t + 2j * math.pi * float(th))
    u = boettcher_inverse(p, W)
    if n == 0:
        return u, True
    return _newton_iterate(p, guess, n, u, cfg)


def trace_ray(p: CubicParams, theta, t_min: float | None = None, cfg: RayConfig = RayConfig()) -> ExternalRay:
    """Points of the external ray of angle theta from far out down to potential t_min."""
    theta = angle(theta)
    t_min = cfg.t_min if t_min is None else t_min
    if t_min <= 0:
        raise DomainError("t_min must be positive")
    rep = escape_classify(p, cfg.escape_iter)
    if rep.status != "both-bounded":
        raise DomainError(f"critical orbit escapes ({rep.status}); rays are not smooth")
    t = max(math.log(10 * escape_radius(p)), 1.0)
    z = boettcher_inverse(p, cmath.exp(t + 2j * math.pi * float(theta)))
    ray = ExternalRay(theta, np.array([z]), np.array([t]))
    return extend_ray(p, ray, t_min, cfg)


def extend_ray(p: CubicParams, ray: ExternalRay, t_min: float, cfg: RayConfig = RayConfig()) -> ExternalRay:
    """Continue a traced ray from its last point down to potential t_min."""
    theta = ray.angle
    z, t = complex(ray.points[-1]), float(ray.potentials[-1])
    pts, ts = list(ray.points), list(ray.potentials)
    ok, reason = ray.ok, ray.reason
    while ok and t > t_min:
        factor = cfg.ratio
        while True:
            t_new = max(t * factor, t_min)
            z_new, conv = ray_point(p, theta, t_new, z, cfg)
            if conv and abs(z_new - z) < 0.5 * (1 + abs(z)):
                break
            factor = 1 - (1 - factor) / 2
            if factor > cfg.min_step_ratio:
                ok, reason = False, f"Newton failed below potential {t:.3g}"
                break
        if not ok:
            break
        z, t = z_new, t_new
        pts.append(z)
        ts.append(t)
    return ExternalRay(theta, np.array(pts), np.array(ts), ok, reason)


def orbit_type(theta: Angle, d: int = 3) -> tuple[int, int]:
    """(preperiod, period) of a rational angle under sigma_d."""
    seen = {}
    x = angle(theta)
    k = 0
    while x not in seen:
        seen[x] = k
        x = lamina.sigma(x, d)
        k += 1
    return seen[x], k - seen[x]


def _cycle_multiplier(p: CubicParams, z: complex, per: int):
    m, w = 1 + 0j, z
    for _ in range(per):
        m *= derivative(p, w)
        w = evaluate(p, w)
    return m, w


def _polish_periodic(p: CubicParams, z: complex, per: int, cfg: RayConfig):
    for _ in range(cfg.newton_iter):
        w, dw = z, 1 + 0j
        for _ in range(per):
            dw *= derivative(p, w)
            w = evaluate(p, w)
        if dw == 1:
            break
        dz = (w - z) / (dw - 1)
        z -= dz
        if abs(dz) < 1e-15 * (1 + abs(z)):
            break
    m, w = _cycle_multiplier(p, z, per)
    res = abs(w - z)
    if res > cfg.landing_tol and abs(m) > 1:
        # in double precision the residual of a long cycle is stuck near
        # |multiplier| * 1e-16; polish in extended precision instead
        zh, resh, mh = _polish_hp(p, z, per, cfg.hp_prec)
        return complex(zh), complex(mh), float(resh), zh
    return z, m, res, None


def _polish_hp(p: CubicParams, z: complex, per: int, prec: int):
    with mpmath.workprec(prec):
        lam, b = mpmath.mpc(p.lam), mpmath.mpc(p.b)
        x = mpmath.mpc(z)
        for _ in range(8):
            w, dw = x, mpmath.mpc(1)
            for _ in range(per):
                dw *= lam + w * (2 * b + 3 * w)
                w = w * (lam + w * (b + w))
            x = x - (w - x) / (dw - 1)
        w, m = x, mpmath.mpc(1)
        for _ in range(per):
            m *= lam + w * (2 * b + 3 * w)
            w = w * (lam + w * (b + w))
        return +x, abs(w - x), m


def land_rational_ray(p: CubicParams, theta, cfg: RayConfig = RayConfig(), _cache=None) -> LandingRecord:
    """Landing point of a rational ray: polish the periodic tail, then pull back."""
    theta = angle(theta)
    pre, per = orbit_type(theta)
    cache = {} if _cache is None else _cache
    ray = cache.get(("ray", theta))
    if ray is None:
        # f^per must act almost linearly between the ray tail and the landing point
        t_end = cfg.t_min if pre else min(cfg.t_min, cfg.land_potential / 3**per)
        ray = trace_ray(p, theta, t_end, cfg)
        cache[("ray", theta)] = ray
    if pre == 0:
        while True:
            z_end = complex(ray.points[-1])
            z, m, res, zh = _polish_periodic(p, z_end, per, cfg)
            jump = abs(z - z_end) > 1e-2 * (1 + abs(z))
            # a weakly repelling cycle pulls its rays in slowly: go deeper
            if not (jump and res <= cfg.landing_tol and abs(m) > 1 + cfg.parabolic_tol
                    and ray.ok and ray.potentials[-1] > cfg.t_floor):
                break
            ray = extend_ray(p, ray, ray.potentials[-1] * cfg.deepen, cfg)
            cache[("ray", theta)] = ray
        # near-parabolic cycles are approached too slowly to trace, so a large
        # final jump there is reported as parabolic-suspect, not unresolved
        status = "ok"
        if res > cfg.landing_tol:
            status = "unresolved"
        elif abs(m) <= 1 + cfg.parabolic_tol:
            status = "parabolic-suspect"
        elif jump:
            status = "unresolved"
        return LandingRecord(theta, z, per, m, 0, float(res), status, ray.ok, zh)
    tail = land_rational_ray(p, lamina.sigma(theta, 3), cfg, cache)
    # pull back one step along this ray: solve f(z) = landing point of sigma(theta)
    while True:
        z_end = complex(ray.points[-1])
        z, conv = _newton_iterate(p, z_end, 1, tail.landing_point, cfg)
        jump = not conv or abs(z - z_end) > 1e-2 * (1 + abs(z))
        if not (jump and tail.status == "ok" and ray.ok and ray.potentials[-1] > cfg.t_floor):
            break
        ray = extend_ray(p, ray, ray.potentials[-1] * cfg.deepen, cfg)
        cache[("ray", theta)] = ray
    status = tail.status if tail.status != "ok" else ("unresolved" if jump else "ok")
    cyc = tail.landing_point
    for _ in range(pre - 1):
        cyc = evaluate(p, cyc)
    w = cyc
    for _ in range(per):
        w = evaluate(p, w)
    return LandingRecord(theta, z, per, tail.multiplier, pre, float(abs(w - cyc)), status, ray.ok)


def rational_angles(q_max: int) -> list[Angle]:
    """All reduced fractions in [0, 1) with denominator <= q_max.

    Every denominator has the form 3^j m with m prime to 3, and such m divides
    3^k - 1 for k the order of 3 mod m, so this is the whole set of
    (pre)periodic angles up to q_max.
    """
    return sorted({Fraction(a, q) for q in range(1, q_max + 1) for a in range(q)})


@dataclass
class LandingClusters:
    records: list
    clusters: list  # lists of angles landing together
    flagged_pairs: list = field(default_factory=list)
    unresolved: list = field(default_factory=list)

    def lamination(self) -> Lamination:
        leaves = []
        for cl in self.clusters:
            if len(cl) < 2:
                continue
            cl = sorted(cl)
            if len(cl) == 2:
                leaves.append(Chord(cl[0], cl[1]))
            else:
                leaves += [Chord(cl[i], cl[(i + 1) % len(cl)]) for i in range(len(cl))]
        return Lamination(leaves, 3, validate=False)

    def to_dict(self):
        return {"clusters": [[str(a) for a in sorted(c)] for c in self.clusters if len(c) > 1],
                "flagged_pairs": [[str(a), str(b), d] for a, b, d in self.flagged_pairs],
                "unresolved": [str(a) for a in self.unresolved],
                "landings": [r.to_dict() for r in self.records]}


def landing_clusters(p: CubicParams, q_max: int, tol: float = 1e-6, cfg: RayConfig = RayConfig()) -> LandingClusters:
    cache: dict = {}
    recs = [land_rational_ray(p, a, cfg, cache) for a in rational_angles(q_max)]
    good = [r for r in recs if r.status != "unresolved"]
    parent = list(range(len(good)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    flagged = []
    for i in range(len(good)):
        for j in range(i + 1, len(good)):
            d = abs(good[i].landing_point - good[j].landing_point)
            if d < tol:
                parent[find(i)] = find(j)
            elif d < 2 * tol:
                flagged.append((good[i].angle, good[j].angle, d))
    groups: dict = {}
    for i, r in enumerate(good):
        groups.setdefault(find(i), []).append(r.angle)
    clusters = sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])
    return LandingClusters(recs, clusters, flagged, [r.angle for r in recs if r.status == "unresolved"])


def rational_lamination_sample(p: CubicParams, q_max: int, tol: float = 1e-6,
                               cfg: RayConfig = RayConfig()) -> Lamination:
    """Leaves joining rational angles (denominator <= q_max) whose rays co-land."""
    lam = landing_clusters(p, q_max, tol, cfg).lamination()
    pair = lamina.first_crossing(lam.leaves)
    if pair is not None:
        raise LaminationError(f"extracted leaves {pair[0]} and {pair[1]} cross")
    return lam


@dataclass
class LeafStability:
    leaf: Chord
    landing_a: list
    landing_b: list
    separation: list
    multiplier_abs: list
    persists: bool
    parabolic_suspect: bool
    motion: float

    def to_dict(self):
        c = lambda z: [z.real, z.imag]
        return {"leaf": str(self.leaf), "landing_a": [c(z) for z in self.landing_a],
                "landing_b": [c(z) for z in self.landing_b], "separation": self.separation,
                "multiplier_abs": self.multiplier_abs, "persists": self.persists,
                "parabolic_suspect": self.parabolic_suspect, "motion": self.motion}


def leaf_stability_probe(p: CubicParams, leaf: Chord, path, tol: float = 1e-6,
                         cfg: RayConfig = RayConfig()) -> LeafStability:
    """Re-land both rays of ``leaf`` at p and along ``path`` (a list of CubicParams)."""
    A, B, sep, mult = [], [], [], []
    parabolic = False
    for q in [p, *path]:
        ra = land_rational_ray(q, leaf.a, cfg)
        rb = land_rational_ray(q, leaf.b, cfg)
        A.append(ra.landing_point)
        B.append(rb.landing_point)
        sep.append(float(abs(ra.landing_point - rb.landing_point)))
        mult.append(float(min(abs(ra.multiplier), abs(rb.multiplier))))
        if "parabolic-suspect" in (ra.status, rb.status):
            parabolic = True
    persists = all(s < tol for s in sep)
    motion = float(max(abs(z - A[0]) for z in A))
    return LeafStability(leaf, A, B, sep, mult, persists, parabolic, motion)
