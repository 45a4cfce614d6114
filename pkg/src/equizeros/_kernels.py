"""Compiled inner loops: scaled Horner evaluation and Aberth-Ehrlich sweeps."""

import numpy as np
from numba import njit

EPS = np.finfo(np.float64).eps
BIG = 1e150
BIG2 = BIG * BIG
TINY = 1e-150
LOG_BIG = np.log(BIG)


@njit(cache=True, nogil=True)
def _horner(c, absc, z):
    n = c.shape[0] - 1
    p = c[n]
    dp = 0.0j
    a = absc[n]
    az = abs(z)
    f = 1.0
    ls = 0.0
    for k in range(n - 1, -1, -1):
        dp = dp * z + p
        p = p * z + c[k] * f
        a = a * az + absc[k] * f
        if a > BIG or dp.real * dp.real + dp.imag * dp.imag > BIG2:
            p *= TINY
            dp *= TINY
            a *= TINY
            f *= TINY
            ls += LOG_BIG
    return p, dp, a, ls


@njit(cache=True, nogil=True)
def scaled_horner(c, z):
    """Return ``(p, dp, absum, log_scale)`` with ``p(z) = p * exp(log_scale)``.

    ``dp`` and ``absum`` (the running bound ``sum |c_k| |z|^k``) share the
    same scale.  Everything is renormalised by 1e-150 whenever it grows past
    1e150, so degree-4000 evaluations at ``|z| = 2`` stay finite.
    """
    return _horner(c, np.abs(c), z)


@njit(cache=True, nogil=True)
def scaled_eval_many(c, zs):
    absc = np.abs(c)
    m = zs.shape[0]
    vals = np.empty(m, dtype=np.complex128)
    logs = np.empty(m, dtype=np.float64)
    bounds = np.empty(m, dtype=np.float64)
    for i in range(m):
        p, dp, a, ls = _horner(c, absc, zs[i])
        vals[i] = p
        logs[i] = ls
        bounds[i] = a
    return vals, logs, bounds


@njit(cache=True, nogil=True)
def _aberth_sum(z, i):
    zi = z[i]
    sr = 0.0
    si = 0.0
    for j in range(z.shape[0]):
        if j != i:
            dr = zi.real - z[j].real
            di = zi.imag - z[j].imag
            if abs(dr) + abs(di) < 1e150:
                inv = 1.0 / (dr * dr + di * di)
                sr += dr * inv
                si -= di * inv
            else:
                r = 1.0 / complex(dr, di)
                sr += r.real
                si += r.imag
    return complex(sr, si)


@njit(cache=True, nogil=True)
def _ratio(c, absc, crev, absrev, z):
    """Newton ratio ``p(z) / p'(z)`` with the relative residual of ``z``.

    For ``|z| > 1`` the reversed polynomial is evaluated at ``1/z``; both the
    ratio and ``|p(z)| / sum |c_k| |z|^k`` are unchanged by the reversal and
    nothing overflows for roots of any representable size.
    """
    n = c.shape[0] - 1
    if abs(z) <= 1.0:
        p, dp, a, ls = _horner(c, absc, z)
        res = abs(p) / a if a > 0 else 0.0
        if dp == 0:
            return 0.0j, res, False
        return p / dp, res, True
    w = 1.0 / z
    q, dq, a, ls = _horner(crev, absrev, w)
    res = abs(q) / a if a > 0 else 0.0
    if q == 0:
        return 0.0j, res, True
    lg = (n - dq * w / q) * w
    if lg == 0:
        return 0.0j, res, False
    return 1.0 / lg, res, True


@njit(cache=True, nogil=True)
def aberth(c, z, tol, max_iter):
    """In-place Gauss-Seidel Aberth-Ehrlich iteration on the roots ``z``.

    A root is frozen once its correction is below ``tol * |z_i|`` or
    once ``|p(z_i)|`` sits inside the Horner rounding-error level.  A final
    pass applies one more correction to every root and keeps it only when the
    relative residual drops.  Returns ``(iterations, done_mask)``.
    """
    n = z.shape[0]
    absc = np.abs(c)
    crev = c[::-1].copy()
    absrev = np.abs(crev)
    done = np.zeros(n, dtype=np.bool_)
    noise = EPS * (n + 1)
    it = 0
    for it in range(1, max_iter + 1):
        active = 0
        for i in range(n):
            if done[i]:
                continue
            zi = z[i]
            ratio, res, ok = _ratio(c, absc, crev, absrev, zi)
            if res <= noise:
                done[i] = True
                continue
            active += 1
            if not ok:
                z[i] = zi + (1.0 + abs(zi)) * 1e-3 * (0.6 + 0.8j)
                continue
            corr = ratio / (1.0 - ratio * _aberth_sum(z, i))
            znew = zi - corr
            z[i] = znew
            if abs(corr) <= tol * abs(znew):
                done[i] = True
        if active == 0:
            break
    for i in range(n):
        zi = z[i]
        ratio, res, ok = _ratio(c, absc, crev, absrev, zi)
        if ratio == 0:
            continue
        znew = zi - ratio / (1.0 - ratio * _aberth_sum(z, i))
        r2, res2, ok2 = _ratio(c, absc, crev, absrev, znew)
        if res2 < res:
            z[i] = znew
    return it, done


@njit(cache=True, nogil=True)
def relative_residuals(c, z):
    absc = np.abs(c)
    crev = c[::-1].copy()
    absrev = np.abs(crev)
    n = z.shape[0]
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        ratio, res, ok = _ratio(c, absc, crev, absrev, z[i])
        out[i] = res
    return out


# -- compensated evaluation ------------------------------------------------------
# Error-free transformations (Knuth TwoSum, Dekker/Veltkamp TwoProd) carry the
# rounding error of every Horner step, which doubles the working precision of
# the final value.

SPLITTER = 134217729.0  # 2^27 + 1


@njit(cache=True, nogil=True)
def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


@njit(cache=True, nogil=True)
def _two_prod(a, b):
    p = a * b
    t = SPLITTER * a
    ah = t - (t - a)
    al = a - ah
    t = SPLITTER * b
    bh = t - (t - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


@njit(cache=True, nogil=True)
def compensated_horner(c, z):
    """``(p(z), p'(z))`` with ``p`` accurate to about twice working precision."""
    n = c.shape[0] - 1
    x = z.real
    y = z.imag
    hr = c[n].real
    hi = c[n].imag
    er = 0.0
    ei = 0.0
    dp = 0.0j
    for k in range(n - 1, -1, -1):
        dp = dp * z + complex(hr + er, hi + ei)
        p1, e1 = _two_prod(hr, x)
        p2, e2 = _two_prod(hi, y)
        p3, e3 = _two_prod(hr, y)
        p4, e4 = _two_prod(hi, x)
        sr, e5 = _two_sum(p1, -p2)
        si, e6 = _two_sum(p3, p4)
        sr, e7 = _two_sum(sr, c[k].real)
        si, e8 = _two_sum(si, c[k].imag)
        nr = er * x - ei * y + e1 - e2 + e5 + e7
        ni = er * y + ei * x + e3 + e4 + e6 + e8
        hr = sr
        hi = si
        er = nr
        ei = ni
    return complex(hr + er, hi + ei), dp


@njit(cache=True, nogil=True)
def _newton_ratio(c, crev, z):
    """``p(z) / p'(z)`` from the compensated evaluator; ``|z| > 1`` goes
    through the reversed polynomial at ``1/z`` so nothing overflows."""
    n = c.shape[0] - 1
    if abs(z) <= 1.0:
        p, dp = compensated_horner(c, z)
        if dp == 0:
            return 0.0j
        return p / dp
    w = 1.0 / z
    q, dq = compensated_horner(crev, w)
    if q == 0:
        return 0.0j
    # p'/p = (n - w q'(w) / q(w)) / z
    lg = (n - dq * w / q) * w
    if lg == 0:
        return 0.0j
    return 1.0 / lg


@njit(cache=True, nogil=True)
def refine(c, z, steps):
    """Aberth corrections driven by compensated values, kept while they shrink."""
    n = z.shape[0]
    crev = c[::-1].copy()
    for i in range(n):
        last = np.inf
        for _ in range(steps):
            ratio = _newton_ratio(c, crev, z[i])
            if ratio == 0:
                break
            corr = ratio / (1.0 - ratio * _aberth_sum(z, i))
            a = abs(corr)
            if not a < last:
                break
            z[i] -= corr
            last = a
            if a <= EPS * abs(z[i]):
                break
