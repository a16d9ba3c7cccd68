"""The marked cubic family f(z) = lam z + b z^2 + z^3.

0 is always fixed with multiplier lam.  This module evaluates the maps,
finds critical and fixed points, decides immediate-basin membership on a
grid, classifies hyperbolic maps with |lam| < 1, solves for centers
f^n(c) = 0 and probes critical orbits for capture by a Siegel disk.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from . import _kernels as K


class DomainError(ValueError):
    pass


class UnresolvedError(RuntimeError):
    pass


@dataclass(frozen=True)
class CubicParams:
    lam: complex
    b: complex

    def __post_init__(self):
        lam, b = complex(self.lam), complex(self.b)
        if not (cmath.isfinite(lam) and cmath.isfinite(b)):
            raise ValueError("parameters must be finite")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "b", b)

    def __call__(self, z):
        return evaluate(self, z)

    def to_dict(self):
        return {"lambda": [self.lam.real, self.lam.imag], "b": [self.b.real, self.b.imag]}


def evaluate(p: CubicParams, z):
    return z * (p.lam + z * (p.b + z))


def derivative(p: CubicParams, z):
    return p.lam + z * (2 * p.b + 3 * z)


def iterate(p: CubicParams, z, n: int):
    for _ in range(n):
        z = evaluate(p, z)
    return z


def orbit(p: CubicParams, z, n: int) -> np.ndarray:
    return K.orbit(p.lam, p.b, complex(z), int(n))


def _stable_quadratic(A, B, C):
    """Roots of A z^2 + B z + C without cancellation."""
    disc = cmath.sqrt(B * B - 4 * A * C)
    if (B.conjugate() * disc).real < 0:
        disc = -disc
    q = -(B + disc) / 2
    if q == 0:
        return 0j, 0j
    return q / A, C / q


@dataclass
class CriticalPair:
    c1: complex
    c2: complex
    roles: dict = field(default_factory=dict)

    def __iter__(self):
        return iter((self.c1, self.c2))

    def to_dict(self):
        d = {"c1": [self.c1.real, self.c1.imag], "c2": [self.c2.real, self.c2.imag]}
        if self.roles:
            d["roles"] = self.roles
        return d


def critical_points(p: CubicParams) -> CriticalPair:
    """Both roots of 3z^2 + 2bz + lam."""
    c1, c2 = _stable_quadratic(3 + 0j, 2 * p.b, p.lam)
    return CriticalPair(complex(c1), complex(c2))


def fixed_points(p: CubicParams) -> list[complex]:
    """0 and the roots of z^2 + bz + lam - 1."""
    w1, w2 = _stable_quadratic(1 + 0j, p.b, p.lam - 1)
    return [0j, complex(w1), complex(w2)]


def match_roots(old, new):
    """Order ``new`` so that new[i] continues old[i] (nearest-root matching)."""
    a, b = new
    if abs(old[0] - a) + abs(old[1] - b) <= abs(old[0] - b) + abs(old[1] - a):
        return a, b
    return b, a


def perturb(p: CubicParams, eps: float) -> CubicParams:
    if not 0 < eps < 1:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    return CubicParams((1 - eps) * p.lam, p.b)


def escape_radius(p: CubicParams) -> float:
    return 2 + abs(p.lam) + abs(p.b)


def filled_radius(p: CubicParams) -> float:
    """Radius outside which |f(z)| > |z| and orbits escape."""
    ab = abs(p.b)
    return (ab + math.sqrt(ab * ab + 4 * (abs(p.lam) + 1))) / 2


# --------------------------------------------------------------------------
# escape


@dataclass
class EscapeReport:
    status: str  # both-bounded | c1-escapes | c2-escapes | both-escape
    iterations: tuple  # first escape iteration per critical point, None if bounded
    max_iter: int
    R: float
    heuristic: bool = True

    def to_dict(self):
        return {"status": self.status, "iterations": list(self.iterations),
                "max_iter": self.max_iter, "R": self.R,
                "bounded_is_heuristic": self.heuristic}


def escape_classify(p: CubicParams, max_iter: int = 1000, R: float | None = None) -> EscapeReport:
    R0 = escape_radius(p)
    if R is None:
        R = R0
    if R < R0:
        raise DomainError(f"escape radius must be at least {R0}")
    its = []
    for c in critical_points(p):
        code, n, _ = K.fate(p.lam, p.b, c, -1.0, R * R, max_iter)
        its.append(n if code == K.ESCAPED else None)
    e1, e2 = (its[0] is not None), (its[1] is not None)
    status = {(False, False): "both-bounded", (True, False): "c1-escapes",
              (False, True): "c2-escapes", (True, True): "both-escape"}[(e1, e2)]
    return EscapeReport(status, tuple(its), max_iter, R)


# --------------------------------------------------------------------------
# certified disks around 0


def certified_rho(p: CubicParams) -> float:
    """Largest rho with |lam| + |b| rho + rho^2 <= (1 + |lam|)/2.

    On that disk |f(z)| <= q |z| with q = (1 + |lam|)/2 < 1, so it lies in the
    immediate basin.  Zero when |lam| >= 1.
    """
    al = abs(p.lam)
    if al >= 1:
        return 0.0
    return float(K.certified_rho(al, abs(p.b), (1 + al) / 2))


def koenigs_coefficients(mu: complex, b: complex, N: int) -> np.ndarray:
    """Taylor coefficients of psi with f(psi(w)) = psi(mu w), psi(w) = w + ...

    Matching w^k gives c_k (mu^k - mu) = [w^k](b psi^2 + psi^3).
    """
    c = np.zeros(N + 1, complex)
    s2 = np.zeros(N + 1, complex)  # coefficients of psi^2
    c[1] = 1
    for k in range(2, N + 1):
        s2[k] = np.dot(c[1:k], c[k - 1 : 0 : -1])
        s3 = np.dot(c[1 : k - 1], s2[k - 1 : 1 : -1]) if k >= 3 else 0
        c[k] = (b * s2[k] + s3) / (mu**k - mu)
    return c


@dataclass
class Linearization:
    """Star-shaped disk image psi(D_s) with psi a truncated Koenigs/Siegel series."""

    mu: complex
    radius_estimate: float  # root-test estimate of the convergence radius
    s: float  # radius of the w-disk actually used (0 if no disk passed)
    r_in: float  # min |psi| on |w| = s: D(0, r_in) lies inside psi(D_s)
    r_out: float
    residual: float
    tail: float
    ok: bool

    def to_dict(self):
        return {k: (v if not isinstance(v, complex) else [v.real, v.imag])
                for k, v in self.__dict__.items()}


def linearization_disk(mu: complex, b: complex, N: int = 256, M: int = 2048,
                       fracs=(0.7, 0.5, 0.35, 0.25, 0.15), tail_tol: float = 1e-13) -> Linearization:
    """Find a disk D_s on which the linearizing series is trustworthy.

    For each trial s the boundary curve Gamma = psi(s e^{i phi}) must be
    star-shaped about 0 (argument strictly increasing once around), so psi is
    univalent on D_s; the truncation tail |c_N| s^N and the functional
    equation residual on the circle must be tiny.  When |mu| < 1 the residual
    must also be small against the inward displacement (1 - |mu|) s |psi'|,
    making psi(D_s) forward invariant; when |mu| = 1 psi(D_s) sits inside
    the Siegel disk.  These are checks on M boundary samples, not proofs.
    """
    c = koenigs_coefficients(mu, b, N)
    k = np.arange(N // 2, N + 1)
    with np.errstate(divide="ignore"):
        r = float(np.min(np.abs(c[k]) ** (-1.0 / k)))
    if not math.isfinite(r):
        r = 1e6
    r = min(r, 1e6)
    poly = c[::-1]
    dpoly = np.polyder(poly)
    phi = 2 * np.pi * np.arange(M) / M
    for frac in fracs:
        s = frac * r
        tail = abs(c[N]) * s**N
        if tail > tail_tol * s:
            continue
        w = s * np.exp(1j * phi)
        G = np.polyval(poly, w)
        fG = G * (mu + G * (b + G))
        res = float(np.max(np.abs(fG - np.polyval(poly, mu * w))))
        ang = np.unwrap(np.angle(G))
        turn = ang[-1] - ang[0] + (np.angle(G[0] / G[-1]) % (2 * np.pi))
        star = bool(np.all(np.diff(ang) > 0)) and abs(turn - 2 * np.pi) < 1e-6
        rin = float(np.min(np.abs(G)))
        if not star or rin <= 0:
            continue
        shrink = (1 - abs(mu)) * s * float(np.min(np.abs(w * np.polyval(dpoly, w)) / s))
        if abs(mu) < 1 and res > 0.1 * shrink:
            continue
        if res > 1e-9 * max(1.0, rin):
            continue
        return Linearization(mu, r, s, rin, float(np.max(np.abs(G))), res, tail, True)
    return Linearization(mu, r, 0.0, 0.0, 0.0, math.inf, math.inf, False)


@dataclass
class Trap:
    radius: float
    kind: str  # "rho", "koenigs" or "none"
    rho: float
    koenigs: float

    def to_dict(self):
        return dict(self.__dict__)


def trap_disk(p: CubicParams, koenigs_below: float = 0.1) -> Trap:
    """Disk around 0 contained in the immediate basin (|lam| < 1)."""
    rho = certified_rho(p)
    kr = 0.0
    al = abs(p.lam)
    if 0 < al < 1 and 1 - al < koenigs_below:
        lin = linearization_disk(p.lam, p.b)
        if lin.ok:
            kr = lin.r_in
    if kr > rho:
        return Trap(kr, "koenigs", rho, kr)
    return Trap(rho, "rho" if rho > 0 else "none", rho, kr)


def siegel_lower_bound(lam: complex, b: complex, **kw) -> Linearization:
    """Disk D(0, r_in) inside the Siegel disk, from the linearizing series at mu = lam."""
    return linearization_disk(lam, b, **kw)


# --------------------------------------------------------------------------
# basin of 0 on a grid


@dataclass(frozen=True)
class BasinConfig:
    grid: int = 129  # odd so that 0 is a cell center
    max_iter: int | None = None  # default: iter_base + iter_slope / (1 - |lam|)
    iter_base: int = 2000
    iter_slope: float = 60.0
    window: float | None = None  # half-width; default: filled-Julia radius
    koenigs_below: float = 0.1
    direct_margin: float = 1e-2  # below this 1 - |lam| uses continuation
    path_per_decade: int = 10
    cycle_max_period: int = 64
    refine_levels: int = 3  # grid doublings allowed when checking a capture preperiod

    def budget(self, lam: complex) -> int:
        if self.max_iter is not None:
            return int(self.max_iter)
        gap = max(1 - abs(lam), 1e-12)
        return int(min(self.iter_base + self.iter_slope / gap, 2**62))


@dataclass
class BasinEstimate:
    x0: float
    y0: float
    h: float
    n: int
    member_mask: np.ndarray  # evaluated cells whose center orbit reached the trap
    component_of_zero: np.ndarray
    trap: Trap
    max_iter: int
    evaluated: int
    budget_cells: int
    complete: bool

    def cell(self, z):
        j = int(math.floor((z.real - self.x0) / self.h + 0.5))
        i = int(math.floor((z.imag - self.y0) / self.h + 0.5))
        if 0 <= i < self.n and 0 <= j < self.n:
            return i, j
        return None

    def contains(self, z) -> bool:
        if abs(z) < self.trap.radius:
            return True
        ij = self.cell(z)
        return ij is not None and bool(self.component_of_zero[ij])

    def diagnostics(self):
        return {"grid": self.n, "h": self.h, "window": [self.x0, self.x0 + (self.n - 1) * self.h],
                "trap": self.trap.to_dict(), "max_iter": self.max_iter,
                "evaluated_cells": int(self.evaluated), "budget_cells": int(self.budget_cells),
                "component_cells": int(self.component_of_zero.sum()), "complete": self.complete}


GRID_SHIFT = (0.1 * (math.sqrt(2) - 1), 0.1 * (math.sqrt(3) - 1))


def _check_attracting(p: CubicParams):
    if abs(p.lam) >= 1:
        raise DomainError(f"need |lambda| < 1, got {abs(p.lam)}")


def basin_estimate(p: CubicParams, cfg: BasinConfig = BasinConfig(), targets=(), early=False,
                   center: complex = 0j, trap: Trap | None = None) -> BasinEstimate:
    """Flood-fill the grid component of 0 among cells whose orbits reach the trap."""
    _check_attracting(p)
    n = cfg.grid | 1
    W = cfg.window if cfg.window is not None else 1.02 * filled_radius(p)
    h = 2 * W / (n - 1)
    # the grid is aligned so that 0 is a cell center
    x0 = center.real - W
    y0 = center.imag - W
    i0 = int(round((0 - y0) / h))
    j0 = int(round((0 - x0) / h))
    if not (0 <= i0 < n and 0 <= j0 < n):
        raise DomainError("window does not contain 0")
    # shift off the axes by an irrational fraction of a cell: for real or
    # imaginary b the axes are invariant, and exact on-axis orbits follow the
    # one-dimensional dynamics, chaining distinct Fatou components together
    x0 = -j0 * h + GRID_SHIFT[0] * h
    y0 = -i0 * h + GRID_SHIFT[1] * h
    trap = trap or trap_disk(p, cfg.koenigs_below)
    R = escape_radius(p)
    ti, tj = [], []
    for z in targets:
        j = int(math.floor((z.real - x0) / h + 0.5))
        i = int(math.floor((z.imag - y0) / h + 0.5))
        if 0 <= i < n and 0 <= j < n:
            ti.append(i)
            tj.append(j)
        else:
            ti.append(-1)
            tj.append(-1)
    max_iter = cfg.budget(p.lam)
    status, comp, ev, bc, complete = K.component_bfs(
        p.lam, p.b, x0, y0, h, n, i0, j0, trap.radius**2, R * R, max_iter,
        np.array(ti, np.int64), np.array(tj, np.int64), early)
    return BasinEstimate(x0, y0, h, n, status == K.TRAPPED, comp, trap, max_iter, ev, bc, complete)


def basin_membership(p: CubicParams, z0: complex, cfg: BasinConfig = BasinConfig()) -> bool:
    """Whether z0 lies in the immediate basin of 0 (grid heuristic).

    Membership is certified by orbit entry into the trap disk along a grid
    path; non-membership is only as good as the grid resolution.
    """
    _check_attracting(p)
    z0 = complex(z0)
    trap = trap_disk(p, cfg.koenigs_below)
    if abs(z0) < trap.radius:
        return True
    est = basin_estimate(p, cfg, targets=[z0], early=True, trap=trap)
    if est.contains(z0):
        return True
    code, _, _ = K.fate(p.lam, p.b, z0, trap.radius**2, escape_radius(p) ** 2, est.max_iter)
    if code == K.BUDGET:
        raise UnresolvedError(f"orbit of {z0} neither reached the trap nor escaped "
                              f"within {est.max_iter} iterations")
    return False


# --------------------------------------------------------------------------
# hyperbolic classification


@dataclass
class HyperbolicClass:
    label: str  # Principal | IACapture | OtherHyperbolic | Unresolved
    m: int | None = None
    critical: CriticalPair | None = None
    evidence: dict = field(default_factory=dict)

    def __str__(self):
        return f"IACapture({self.m})" if self.label == "IACapture" else self.label

    def to_dict(self):
        return {"label": self.label, "m": self.m,
                "critical": self.critical.to_dict() if self.critical else None,
                "evidence": self.evidence}


def _attracting_cycle(p: CubicParams, z: complex, cfg: BasinConfig, R: float):
    """Look for an attracting cycle near the end of a non-converging orbit."""
    orb = orbit(p, z, 4 * cfg.cycle_max_period)
    if not np.all(np.isfinite(orb)) or np.max(np.abs(orb)) > R:
        return None
    z = orb[-1]
    scale = 1 + abs(z)
    for per in range(1, cfg.cycle_max_period + 1):
        w = orb[-1 - per]
        if abs(w - z) > 1e-6 * scale:
            continue
        # Newton on f^per(z) - z
        x = complex(z)
        for _ in range(50):
            y, dy = x, 1 + 0j
            for _ in range(per):
                dy *= derivative(p, y)
                y = evaluate(p, y)
            if dy == 1:
                break
            dx = (y - x) / (dy - 1)
            x -= dx
            if abs(dx) < 1e-14 * (1 + abs(x)):
                break
        mult = 1 + 0j
        y = x
        for _ in range(per):
            mult *= derivative(p, y)
            y = evaluate(p, y)
        if abs(y - x) < 1e-9 * (1 + abs(x)) and abs(mult) < 1 and abs(x) > 1e-6:
            return {"period": per, "point": [x.real, x.imag], "multiplier_abs": abs(mult)}
    return None


def _fates(p: CubicParams, trap: Trap, max_iter: int):
    R = escape_radius(p)
    out = []
    for c in critical_points(p):
        code, n, z = K.fate(p.lam, p.b, c, trap.radius**2, R * R, max_iter)
        out.append((code, n, z))
    return out


def classify_hyperbolic(p: CubicParams, cfg: BasinConfig = BasinConfig()) -> HyperbolicClass:
    """Principal, IACapture(m), OtherHyperbolic or Unresolved for |lam| < 1."""
    _check_attracting(p)
    if abs(p.lam) > 0 and 1 - abs(p.lam) < cfg.direct_margin:
        return _classify_by_continuation(p, cfg)
    return _classify_direct(p, cfg)


def _classify_direct(p: CubicParams, cfg: BasinConfig) -> HyperbolicClass:
    cp = critical_points(p)
    trap = trap_disk(p, cfg.koenigs_below)
    max_iter = cfg.budget(p.lam)
    R = escape_radius(p)
    fates = _fates(p, trap, max_iter)
    ev = {"trap": trap.to_dict(), "max_iter": max_iter,
          "critical_fates": [{"fate": ["trapped", "escaped", "budget"][f[0]], "iterations": int(f[1])}
                             for f in fates]}
    if any(f[0] == K.ESCAPED for f in fates):
        ev["escape"] = True
        return HyperbolicClass("OtherHyperbolic", None, cp, ev)
    for i, f in enumerate(fates):
        if f[0] == K.BUDGET:
            cyc = _attracting_cycle(p, f[2], cfg, R)
            if cyc is not None:
                ev["cycle"] = cyc
                ev["cycle_critical"] = i + 1
                return HyperbolicClass("OtherHyperbolic", None, cp, ev)
            ev["reason"] = f"critical orbit c{i + 1} neither converged nor found a cycle"
            return HyperbolicClass("Unresolved", None, cp, ev)
    est = basin_estimate(p, cfg, targets=list(cp), early=True, trap=trap)
    ev["basin"] = est.diagnostics()
    inside = [est.contains(c) for c in cp]
    if all(inside):
        cp.roles = {"c1": "omega1", "c2": "omega1"}
        return HyperbolicClass("Principal", None, cp, ev)
    if not any(inside):
        ev["reason"] = "neither critical point resolved into the component of 0"
        return HyperbolicClass("Unresolved", None, cp, ev)
    k = 1 if inside[0] else 0
    omega2 = (cp.c1, cp.c2)[k]
    m = K.first_hit(p.lam, p.b, omega2, est.component_of_zero, est.x0, est.y0, est.h, est.n,
                    trap.radius**2, R * R, max_iter)
    # thin parts of the basin are missed by a coarse grid, which can only
    # overstate m: refine until the preperiod stops dropping
    grids = [est.n]
    for _ in range(cfg.refine_levels):
        if m <= 1:
            break
        fine = basin_estimate(p, replace(cfg, grid=2 * grids[-1] - 1), trap=trap)
        grids.append(fine.n)
        m2 = K.first_hit(p.lam, p.b, omega2, fine.component_of_zero, fine.x0, fine.y0, fine.h,
                         fine.n, trap.radius**2, R * R, max_iter)
        if m2 < 1 or m2 >= m:
            break
        m = m2
    ev["preperiod_grids"] = grids
    if m < 1:
        ev["reason"] = "second critical orbit never reached the component of 0"
        return HyperbolicClass("Unresolved", None, cp, ev)
    cp.roles = {f"c{2 - k}": "omega1", f"c{k + 1}": "omega2"}
    return HyperbolicClass("IACapture", int(m), cp, ev)


def _classify_by_continuation(p: CubicParams, cfg: BasinConfig) -> HyperbolicClass:
    """Near-indifferent multipliers: walk radially out to 1 - |lam| = margin.

    Along the path lam' = t lam/|lam| both critical orbits must converge to 0.
    Maps with that property form an open set whose connected pieces are
    single hyperbolic components, so the label found at the end of the path
    applies to p.  If the path leaves the set early, the last rung inside it
    is classified directly instead (at a larger iteration budget).  The path
    is sampled, so this is evidence, not proof.
    """
    gap0 = 1 - abs(p.lam)
    unit = p.lam / abs(p.lam)
    n_steps = max(1, math.ceil(cfg.path_per_decade * math.log10(cfg.direct_margin / gap0)))
    gaps = [gap0 * (cfg.direct_margin / gap0) ** (k / n_steps) for k in range(n_steps + 1)]
    roots = tuple(critical_points(p))
    track = [roots]
    path = []
    left = None
    for g in gaps:
        q = CubicParams((1 - g) * unit, p.b)
        trap = trap_disk(q, cfg.koenigs_below)
        fates = _fates(q, trap, cfg.budget(q.lam))
        if trap.radius <= 0 or any(f[0] != K.TRAPPED for f in fates):
            left = {"left_at_gap": g, "critical_fates": [int(f[0]) for f in fates]}
            break
        roots = match_roots(roots, tuple(critical_points(q)))
        track.append(roots)
        path.append({"gap": g, "trap": trap.radius, "iterations": [int(f[1]) for f in fates]})
    if not path:
        ev = {"path_gaps": [float(x) for x in gaps], **left,
              "reason": "p itself is not in the set where both critical orbits tend to 0"}
        return HyperbolicClass("Unresolved", None, critical_points(p), ev)
    # a component can be thinner than the margin: stop at the last rung inside it
    end = CubicParams((1 - path[-1]["gap"]) * unit, p.b)
    res = _classify_direct(end, cfg)
    cp = critical_points(p)
    if res.critical is not None and res.critical.roles:
        end_roots = (res.critical.c1, res.critical.c2)
        # pull roles back along the path: track[-1] continues the original pair
        order = match_roots(track[-1], end_roots)
        roles_end = {end_roots[0]: res.critical.roles.get("c1"), end_roots[1]: res.critical.roles.get("c2")}
        cp.roles = {"c1": roles_end[order[0]], "c2": roles_end[order[1]]}
    ev = {"method": "continuation", "path": path, "endpoint": end.to_dict(),
          "endpoint_evidence": res.evidence}
    if left is not None:
        ev.update(left)
    return HyperbolicClass(res.label, res.m, cp, ev)


# --------------------------------------------------------------------------
# center curves


@dataclass
class CenterPoint:
    b: complex
    c: complex
    residual: float
    n: int

    def to_dict(self):
        return {"b": [self.b.real, self.b.imag], "c": [self.c.real, self.c.imag],
                "residual": self.residual, "n": self.n}


def _b_of_c(lam, c):
    return -(3 * c * c + lam) / (2 * c)


def default_seeds(lam: complex, grid: int = 40, bmax: float = 4.0) -> np.ndarray:
    """Critical points of the b-grid |Re b|, |Im b| <= bmax, both branches."""
    x = np.linspace(-bmax, bmax, grid)
    B = (x[None, :] + 1j * x[:, None]).ravel()
    disc = np.sqrt(B * B - 3 * lam)
    c = np.concatenate([(-B + disc) / 3, (-B - disc) / 3])
    return c[np.abs(c) > 1e-12]


def center_points(lam: complex, n: int, branch: int | None = None, seeds=None,
                  tol: float = 1e-10, iters: int = 80, bmax: float | None = None) -> list[CenterPoint]:
    """Solutions of f^n(c) = 0 with c a critical point of f, f^k(c) != 0 for k < n.

    The family of critical points is parametrized by c itself via
    b = -(3c^2 + lam)/(2c), so no square-root branch has to be followed.
    ``branch`` (1 or 2) keeps only solutions where c is the corresponding
    root of critical_points.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    lam = complex(lam)
    if seeds is None:
        cs = default_seeds(lam)
    else:
        seeds = np.atleast_1d(np.asarray(seeds, complex))
        disc = np.sqrt(seeds * seeds - 3 * lam)
        cs = np.concatenate([(-seeds + disc) / 3, (-seeds - disc) / 3])
        cs = cs[np.abs(cs) > 1e-12]
    out, res, step = K.newton_center(lam, cs.astype(complex), int(n), iters, 1e-14)
    found: list[CenterPoint] = []
    for c, r, dc in zip(out, res, step):
        if not (np.isfinite(r) and r < tol):
            continue
        c = complex(c)
        # a small residual near a multiple root (c -> 0 when lam = 0) is not convergence
        if not dc < 1e-10 * abs(c):
            continue
        b = _b_of_c(lam, c)
        if bmax is not None and abs(b) > bmax:
            continue
        p = CubicParams(lam, b)
        z, ok = c, True
        for k in range(n):
            if k >= 1 and abs(z) < 1e-8:
                ok = False
                break
            if k == 0 and abs(z) < 1e-8:
                ok = False
                break
            z = evaluate(p, z)
        if not ok:
            continue
        if branch is not None:
            cp = critical_points(p)
            which = 1 if abs(cp.c1 - c) <= abs(cp.c2 - c) else 2
            if which != branch:
                continue
        if any(abs(b - q.b) < 1e-8 * (1 + abs(b)) and abs(c - q.c) < 1e-8 for q in found):
            continue
        found.append(CenterPoint(b, c, float(r), n))
    found.sort(key=lambda q: (round(abs(q.b), 9), round(cmath.phase(q.b), 9), round(q.c.real, 9)))
    return found


def solve_center_curve(lam: complex, n: int, branch: int | None = None, seeds=None,
                       tol: float = 1e-10) -> list[complex]:
    return [q.b for q in center_points(lam, n, branch, seeds, tol)]


# --------------------------------------------------------------------------
# Siegel capture probe


@dataclass(frozen=True)
class ProbeConfig:
    n_skip: int = 64
    n_tail: int = 20000
    n_triples: int = 2000
    max_ratio: float = 50.0
    clearance: float = 0.02  # relative to the larger critical modulus
    recurrence_tol: float = 1e-2
    unit_tol: float = 1e-9


@dataclass
class CaptureEvidence:
    verdict: str  # captured | converging-to-0 | escaped | unresolved
    tail_radius_range: tuple
    order_agreement: float
    entry: int | None = None  # first k with f^k(z0) recurrent on the tail's invariant curve
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {"verdict": self.verdict, "tail_radius_range": list(self.tail_radius_range),
                "order_agreement": self.order_agreement, "entry": self.entry, "details": self.details}


def _orient(a, b, c):
    """Sign of the circular order of three points of R/Z (+1 counterclockwise)."""
    ab = (b - a) % 1.0
    ac = (c - a) % 1.0
    if ab == 0 or ac == 0 or ab == ac:
        return 0
    return 1 if ab < ac else -1


def _triples(T: int, count: int):
    """Deterministic spread of index triples in [0, T)."""
    out = []
    strides = (1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987)
    i = 0
    while len(out) < count:
        s1 = strides[i % len(strides)]
        s2 = strides[(i // len(strides) + i + 3) % len(strides)]
        a = (i * 7919) % T
        bb, cc = (a + s1) % T, (a + s1 + s2) % T
        if len({a, bb, cc}) == 3:
            out.append((a, bb, cc))
        i += 1
    return out


def _theta_value(theta) -> float:
    if isinstance(theta, (int, Fraction)):
        raise DomainError("rotation number must be irrational; got an exact rational")
    if isinstance(theta, str):
        if "/" in theta:
            raise DomainError("rotation number must be irrational; got an exact rational")
        return float(theta)
    return float(theta)


def siegel_capture_probe(p: CubicParams, theta, cfg: ProbeConfig = ProbeConfig(),
                         z0: complex | None = None, which: int = 1) -> CaptureEvidence:
    """Evidence that the orbit of z0 (default: critical point ``which``) is captured.

    The tail f^k(z0), k in [n_skip, n_skip + n_tail), must stay in an annulus
    around 0 away from 0 and from the escape radius, keep clear of both
    critical points, and have the circular order about 0 of the rigid
    rotation k theta on every sampled triple.
    """
    th = _theta_value(theta)
    if abs(abs(p.lam) - 1) > cfg.unit_tol:
        raise DomainError(f"|lambda| = {abs(p.lam)} is not on the unit circle")
    if abs(p.lam - cmath.exp(2j * math.pi * th)) > 1e-6:
        raise DomainError("lambda does not match exp(2 pi i theta)")
    cp = critical_points(p)
    if z0 is None:
        z0 = (cp.c1, cp.c2)[which - 1]
    R = escape_radius(p)
    total = cfg.n_skip + cfg.n_tail
    orb = orbit(p, z0, total)
    bad = ~np.isfinite(orb) | (np.abs(orb) > R)
    if bad.any():
        k = int(np.argmax(bad))
        return CaptureEvidence("escaped", (math.nan, math.nan), 0.0, None, {"escape_iteration": k})
    tail = orb[cfg.n_skip:]
    rad = np.abs(tail)
    rmin, rmax = float(rad.min()), float(rad.max())
    q = len(tail) // 4
    first, last = float(np.mean(rad[:q])), float(np.mean(rad[-q:]))
    details = {"n_skip": cfg.n_skip, "n_tail": cfg.n_tail}
    if rmin == 0 or last < 0.5 * first:
        return CaptureEvidence("converging-to-0", (rmin, rmax), 0.0, None,
                               {**details, "mean_radius_first_quarter": first,
                                "mean_radius_last_quarter": last})
    args = (np.angle(tail) / (2 * np.pi)) % 1.0
    rot = (np.arange(len(tail)) * th) % 1.0
    agree = 0
    trip = _triples(len(tail), cfg.n_triples)
    for a, bb, cc in trip:
        if _orient(args[a], args[bb], args[cc]) == _orient(rot[a], rot[bb], rot[cc]):
            agree += 1
    frac = agree / len(trip)
    scale = max(abs(cp.c1), abs(cp.c2), 1e-300)
    clear = float(min(np.min(np.abs(tail - cp.c1)), np.min(np.abs(tail - cp.c2))))
    details.update({"clearance": clear, "clearance_required": cfg.clearance * scale,
                    "radius_ratio": rmax / rmin})
    entry = None
    for k in range(cfg.n_skip + 1):
        ahead = orb[k + 1 : k + 1 + cfg.n_tail]
        if np.min(np.abs(ahead - orb[k])) < cfg.recurrence_tol * rmax:
            entry = k
            break
    captured = (rmin > 0 and rmax < R and frac == 1.0 and rmax / rmin <= cfg.max_ratio
                and clear >= cfg.clearance * scale)
    return CaptureEvidence("captured" if captured else "unresolved", (rmin, rmax), frac, entry, details)
