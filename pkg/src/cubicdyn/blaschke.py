"""Quadratic Blaschke products fixing 0.

Q_a(z) = z (a - z) / (1 - conj(a) z), |a| < 1, and the rotated family
B_{b,s}(z) = s z (b - z) / (1 - conj(b) z).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

POLE_TOL = 1e-14


class PoleError(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class NormalizedBlaschke:
    a: complex

    def __post_init__(self):
        a = complex(self.a)
        if not abs(a) < 1:
            raise ValueError(f"need |a| < 1, got |a| = {abs(a)}")
        object.__setattr__(self, "a", a)


@dataclass(frozen=True)
class GeneralBlaschke:
    b: complex
    s: complex

    def __post_init__(self):
        b, s = complex(self.b), complex(self.s)
        if not 0 < abs(b) < 1:
            raise ValueError("need 0 < |b| < 1")
        if abs(abs(s) - 1) > 1e-12:
            raise ValueError("need |s| = 1")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "s", s)

    def __call__(self, z):
        return _blaschke(self.b, z, self.s)


def _as_a(Q) -> complex:
    return Q.a if isinstance(Q, NormalizedBlaschke) else complex(Q)


def _check_pole(den):
    if np.any(np.abs(den) < POLE_TOL):
        raise PoleError("evaluation point at the pole 1/conj(a)")


def _blaschke(a, z, s=1.0):
    z = np.asarray(z, dtype=complex)
    den = 1 - np.conj(a) * z
    _check_pole(den)
    out = s * z * (a - z) / den
    return out[()] if out.ndim == 0 else out


def evaluate(Q, z):
    """Q_a(z); works on scalars and arrays."""
    return _blaschke(_as_a(Q), z)


def derivative(Q, z):
    """Q_a'(z) = (conj(a) z^2 - 2z + a) / (1 - conj(a) z)^2."""
    a = _as_a(Q)
    z = np.asarray(z, dtype=complex)
    den = 1 - np.conj(a) * z
    _check_pole(den)
    out = (np.conj(a) * z * z - 2 * z + a) / den**2
    return out[()] if out.ndim == 0 else out


def critical_point_in_disk(Q, with_flag: bool = False):
    """c_a = a / (1 + sqrt(1 - |a|^2)), the critical point inside the disk.

    The radicand is a nonnegative real so the principal root is unambiguous.
    For a = 0 the two critical points of -z^2 merge at 0; ``with_flag``
    returns ``(0, True)`` in that case.
    """
    a = _as_a(Q)
    c = a / (1 + np.sqrt(1 - abs(a) ** 2))
    if with_flag:
        return c, a == 0
    return c


def critical_value(Q, formula: bool = False) -> complex:
    """Q_a(c_a).  ``formula=True`` uses the closed form (1-sqrt(1-|a|^2))^2 / conj(a)^2."""
    a = _as_a(Q)
    if a == 0:
        return 0j
    if formula:
        return (1 - np.sqrt(1 - abs(a) ** 2)) ** 2 / np.conj(a) ** 2
    return critical_point_in_disk(a) ** 2


def normalize(B: GeneralBlaschke) -> tuple[NormalizedBlaschke, complex]:
    """Rotation rho and a with rho^-1 B(rho z) = Q_a(z).

    With B = s z (b - z)/(1 - conj(b) z) and rho = conj(s) one gets a = s b.
    """
    rho = np.conj(B.s)
    return NormalizedBlaschke(B.s * B.b), complex(rho)


def denormalize(Q: NormalizedBlaschke, rho: complex) -> GeneralBlaschke:
    s = np.conj(rho)
    return GeneralBlaschke(Q.a / s, s)


def expansion_margin(Q, n_samples: int = 4096) -> float:
    """Minimum of |Q_a'| over equispaced circle samples (a sampled check)."""
    t = np.arange(n_samples) / n_samples
    z = np.exp(2j * np.pi * t)
    return float(np.min(np.abs(derivative(Q, z))))


def critical_orbit_near_circle(a, m: int) -> float:
    """min over 0 <= i <= m of |Q_a^i(c_a)|."""
    a = _as_a(a)
    z = critical_point_in_disk(a)
    best = abs(z)
    for _ in range(m):
        z = _blaschke(a, z)
        best = min(best, abs(z))
    return float(best)


def near_circle_ladder(s: complex, m: int, eps: float, deltas=None):
    """Search a decreasing ladder of delta' until min_i |Q_a^i(c_a)| > 1 - eps.

    Returns ``(delta', a, value)`` for the first rung that works, or None.
    """
    if deltas is None:
        deltas = [10.0 ** (-k / 2) for k in range(2, 41)]
    for dl in deltas:
        a = (1 - dl) * s
        v = critical_orbit_near_circle(a, m)
        if v > 1 - eps:
            return dl, a, v
    return None


def rotation_limit_deviation(a, s: complex, K_samples, min_dist: float = 1e-3) -> float:
    """max over K of |Q_a(z) - s z|.

    At a = s the factor (s - z)/(1 - conj(s) z) equals s identically, so it is
    evaluated in cancelled form there instead of through the 0/0 at z = s.
    """
    K = np.atleast_1d(np.asarray(K_samples, dtype=complex))
    if np.any(np.abs(K - s) < min_dist):
        raise ValueError("sample set must stay away from s")
    a = complex(a)
    if a == s and abs(abs(s) - 1) < 1e-15:
        vals = K * s
    else:
        vals = K * (a - K) / (1 - np.conj(a) * K)
    return float(np.max(np.abs(vals - s * K)))
