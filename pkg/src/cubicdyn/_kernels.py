"""numba kernels for iterating f(z) = lam z + b z^2 + z^3.

Status codes shared by the kernels:
    0  orbit entered the trap disk |z| < r_trap
    1  orbit left the escape disk |z| > R
    2  iteration budget exhausted
"""

import numpy as np
from numba import njit

TRAPPED, ESCAPED, BUDGET = 0, 1, 2


@njit(cache=True)
def step(lam, b, z):
    return z * (lam + z * (b + z))


@njit(cache=True)
def fate(lam, b, z, trap2, R2, max_iter):
    for i in range(max_iter):
        a2 = z.real * z.real + z.imag * z.imag
        if a2 < trap2:
            return TRAPPED, i, z
        if a2 > R2:
            return ESCAPED, i, z
        z = z * (lam + z * (b + z))
    return BUDGET, max_iter, z


@njit(cache=True)
def orbit(lam, b, z, n):
    out = np.empty(n + 1, np.complex128)
    out[0] = z
    for i in range(n):
        z = z * (lam + z * (b + z))
        out[i + 1] = z
    return out


@njit(cache=True)
def certified_rho(alam, ab, q):
    """Largest rho with alam + ab*rho + rho^2 <= q, by bisection."""
    if alam > q:
        return 0.0
    lo, hi = 0.0, 1.0
    while alam + ab * hi + hi * hi <= q:
        hi *= 2.0
    for _ in range(80):
        m = 0.5 * (lo + hi)
        if alam + ab * m + m * m <= q:
            lo = m
        else:
            hi = m
    return lo


@njit(cache=True)
def component_bfs(lam, b, x0, y0, h, n, i0, j0, trap2, R2, max_iter, ti, tj, early):
    """Lazy flood fill of the grid component containing cell (i0, j0).

    A cell is a member when the orbit of its center enters the trap disk.
    Only cells adjacent to the growing component are ever evaluated.  With
    ``early`` set, the search stops once every target cell has been reached.

    Returns (status, comp, evaluated, budget_cells, complete) where status is
    -1 for unevaluated cells and a fate code otherwise.
    """
    status = np.full((n, n), -1, np.int8)
    comp = np.zeros((n, n), np.bool_)
    qi = np.empty(n * n, np.int64)
    qj = np.empty(n * n, np.int64)
    evaluated = 0
    budget_cells = 0
    z = complex(x0 + j0 * h, y0 + i0 * h)
    code, it, zz = fate(lam, b, z, trap2, R2, max_iter)
    status[i0, j0] = code
    evaluated += 1
    if code != TRAPPED:
        return status, comp, evaluated, budget_cells + (code == BUDGET), True
    comp[i0, j0] = True
    head, tail = 0, 1
    qi[0] = i0
    qj[0] = j0
    di = np.array([1, -1, 0, 0])
    dj = np.array([0, 0, 1, -1])
    nt = ti.shape[0]
    while head < tail:
        if early and nt > 0:
            found = 0
            for t in range(nt):
                if ti[t] >= 0 and comp[ti[t], tj[t]]:
                    found += 1
            if found == nt:
                return status, comp, evaluated, budget_cells, False
        ci = qi[head]
        cj = qj[head]
        head += 1
        for k in range(4):
            a = ci + di[k]
            c = cj + dj[k]
            if a < 0 or a >= n or c < 0 or c >= n:
                continue
            if status[a, c] < 0:
                z = complex(x0 + c * h, y0 + a * h)
                code, it, zz = fate(lam, b, z, trap2, R2, max_iter)
                status[a, c] = code
                evaluated += 1
                if code == BUDGET:
                    budget_cells += 1
            if status[a, c] == TRAPPED and not comp[a, c]:
                comp[a, c] = True
                qi[tail] = a
                qj[tail] = c
                tail += 1
    return status, comp, evaluated, budget_cells, True


@njit(cache=True)
def first_hit(lam, b, z, comp, x0, y0, h, n, trap2, R2, max_iter):
    """Smallest k >= 1 with f^k(z) in the trap disk or in a component cell."""
    for k in range(1, max_iter + 1):
        z = z * (lam + z * (b + z))
        a2 = z.real * z.real + z.imag * z.imag
        if a2 < trap2:
            return k
        if a2 > R2:
            return -1
        j = int(np.floor((z.real - x0) / h + 0.5))
        i = int(np.floor((z.imag - y0) / h + 0.5))
        if 0 <= i < n and 0 <= j < n and comp[i, j]:
            return k
    return -2


@njit(cache=True)
def newton_center(lam, cs, n, iters, tol):
    """Damped Newton on G(c) = f^n(c) with b = -(3c^2 + lam)/(2c), for many seeds."""
    m = cs.shape[0]
    out = cs.copy()
    res = np.empty(m)
    step = np.empty(m)
    for s in range(m):
        c = cs[s]
        gval = 0j
        for _ in range(iters):
            if c == 0:
                break
            b = -(3 * c * c + lam) / (2 * c)
            db = -1.5 + lam / (2 * c * c)
            z = c
            dz = 1.0 + 0j
            for k in range(n):
                dz = (lam + 2 * b * z + 3 * z * z) * dz + z * z * db
                z = z * (lam + z * (b + z))
            gval = z
            if abs(gval) < tol:
                break
            if dz == 0:
                c = c * (1 + 1e-7) + 1e-9
                continue
            delta = gval / dz
            t = 1.0
            ok = False
            for _ in range(30):
                cn = c - t * delta
                if cn != 0:
                    bn = -(3 * cn * cn + lam) / (2 * cn)
                    zn = cn
                    for k in range(n):
                        zn = zn * (lam + zn * (bn + zn))
                    if abs(zn) < abs(gval):
                        ok = True
                        break
                t *= 0.5
            if not ok:
                c = c - delta
            else:
                c = cn
        out[s] = c
        if c != 0:
            b = -(3 * c * c + lam) / (2 * c)
            db = -1.5 + lam / (2 * c * c)
            z = c
            dz = 1.0 + 0j
            for k in range(n):
                dz = (lam + 2 * b * z + 3 * z * z) * dz + z * z * db
                z = z * (lam + z * (b + z))
            res[s] = abs(z)
            step[s] = abs(z / dz) if dz != 0 else np.inf
        else:
            res[s] = np.inf
            step[s] = np.inf
    return out, res, step
