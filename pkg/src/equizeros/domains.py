"""Analytic Jordan domains described by their exterior conformal map.

``psi`` maps ``|w| > 1`` onto the exterior of the domain with ``psi(inf) = inf``
and positive leading coefficient (the capacity); ``phi`` is its inverse.  Both
extend to ``|w| > r_inner``.  For Laurent maps ``r_inner`` is a numerical
estimate (see :func:`estimate_r_inner`), not a certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensembles import make_rng

__all__ = [
    "InteriorPointError",
    "Domain",
    "Disk",
    "Ellipse",
    "Laurent",
    "LevelCurve",
    "estimate_r_inner",
    "domain_from_dict",
]


class InteriorPointError(ValueError):
    """The point lies inside ``L_{r_inner}`` where ``phi`` is unavailable."""


@dataclass(frozen=True)
class LevelCurve:
    rho: float
    w: np.ndarray
    points: np.ndarray
    deriv_samples: np.ndarray


class Domain:
    """Base class.  Subclasses supply ``laurent`` data and may override the inverse."""

    kind = "abstract"
    r_inner = 0.0

    # Laurent data of psi: d*w + c0 + sum_j tail[j-1] * w**-j
    d: float
    c0: complex
    tail: np.ndarray

    @property
    def capacity(self) -> float:
        return float(self.d)

    def psi(self, w):
        w = np.asarray(w, dtype=complex)
        out = self.d * w + self.c0
        if len(self.tail):
            inv = 1.0 / w
            acc = np.zeros_like(w)
            for c in self.tail[::-1]:
                acc = (acc + c) * inv
            out = out + acc
        return out

    def dpsi(self, w):
        w = np.asarray(w, dtype=complex)
        out = np.full_like(w, self.d)
        if len(self.tail):
            inv = 1.0 / w
            acc = np.zeros_like(w)
            # sum_j -j c_j w^{-j-1}
            for j in range(len(self.tail), 0, -1):
                acc = (acc - j * self.tail[j - 1]) * inv
            out = out + acc * inv
        return out

    def exterior_map(self, w: complex) -> complex:
        if abs(w) <= self.r_inner:
            raise InteriorPointError(f"|w| = {abs(w)} <= r_inner = {self.r_inner}")
        return complex(self.psi(w))

    def _inverse_array(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def inverse_map_array(self, z) -> np.ndarray:
        """Vectorised ``phi``; interior points come back as NaN."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        w = self._inverse_array(z)
        bad = ~np.isfinite(w) | (np.abs(w) <= self.r_inner)
        w[bad] = np.nan
        return w

    def inverse_map(self, z: complex) -> complex:
        w = self.inverse_map_array(np.array([z]))[0]
        if not np.isfinite(w):
            raise InteriorPointError(f"{z} lies inside the inner level curve")
        return complex(w)

    def green_function(self, z: complex) -> float:
        return math.log(abs(self.inverse_map(z)))

    def green_array(self, z) -> np.ndarray:
        return np.log(np.abs(self.inverse_map_array(z)))

    def level_curve(self, rho: float, m: int) -> LevelCurve:
        if rho <= self.r_inner:
            raise ValueError(f"rho = {rho} must exceed r_inner = {self.r_inner}")
        if m < 8:
            raise ValueError("level curve needs at least 8 nodes")
        w = rho * np.exp(2j * np.pi * np.arange(m) / m)
        return LevelCurve(rho, w, self.psi(w), self.dpsi(w))

    def equilibrium_sample(self, m: int, seed: int) -> np.ndarray:
        """``m`` draws from the equilibrium measure (``psi`` of uniform circle points)."""
        if m < 1:
            raise ValueError("m must be >= 1")
        theta = 2 * np.pi * make_rng(seed).random(m)
        return self.psi(np.exp(1j * theta))

    def to_dict(self) -> dict:
        raise NotImplementedError


class Disk(Domain):
    kind = "disk"

    def __init__(self, center: complex = 0.0, radius: float = 1.0):
        if not radius > 0:
            raise ValueError("radius must be positive")
        self.center = complex(center)
        self.radius = float(radius)
        self.d = self.radius
        self.c0 = self.center
        self.tail = np.zeros(0, dtype=complex)
        self.r_inner = 0.0

    def psi(self, w):
        return self.center + self.radius * np.asarray(w, dtype=complex)

    def _inverse_array(self, z):
        return (z - self.center) / self.radius

    def to_dict(self):
        return {"kind": "disk", "center": [self.center.real, self.center.imag], "radius": self.radius}

    def __repr__(self):
        return f"Disk(center={self.center}, radius={self.radius})"


class Ellipse(Domain):
    """Ellipse with semi-axes ``a >= b > 0`` and foci on the real axis.

    ``psi(w) = alpha*w + beta/w`` with ``alpha = (a+b)/2``, ``beta = (a-b)/2``.
    """

    kind = "ellipse"

    def __init__(self, a: float, b: float):
        if not a >= b > 0:
            raise ValueError("need a >= b > 0")
        self.a = float(a)
        self.b = float(b)
        self.alpha = (a + b) / 2
        self.beta = (a - b) / 2
        self.d = self.alpha
        self.c0 = 0j
        self.tail = np.array([self.beta], dtype=complex) if self.beta else np.zeros(0, dtype=complex)
        self.r_inner = math.sqrt(self.beta / self.alpha)

    def _inverse_array(self, z):
        root = np.sqrt(z * z - 4 * self.alpha * self.beta)
        w1 = (z + root) / (2 * self.alpha)
        w2 = (z - root) / (2 * self.alpha)
        a1, a2 = np.abs(w1), np.abs(w2)
        w = np.where(a1 >= a2, w1, w2)
        # both preimages have modulus sqrt(beta/alpha) on the focal segment
        tie = np.isclose(a1, a2, rtol=1e-13, atol=0.0) & (self.beta > 0)
        w[tie] = np.nan
        return w

    def to_dict(self):
        return {"kind": "ellipse", "a": self.a, "b": self.b}

    def __repr__(self):
        return f"Ellipse(a={self.a}, b={self.b})"


def _segments_cross(p: np.ndarray) -> bool:
    """True if the closed polygon through ``p`` has two non-adjacent edges that intersect."""
    a = p
    b = np.roll(p, -1)
    m = len(p)
    ax, ay, bx, by = a.real, a.imag, b.real, b.imag

    def orient(i_x, i_y, j_x, j_y, k_x, k_y):
        return (j_x - i_x) * (k_y - i_y) - (j_y - i_y) * (k_x - i_x)

    o1 = orient(ax[:, None], ay[:, None], bx[:, None], by[:, None], ax[None, :], ay[None, :])
    o2 = orient(ax[:, None], ay[:, None], bx[:, None], by[:, None], bx[None, :], by[None, :])
    o3 = orient(ax[None, :], ay[None, :], bx[None, :], by[None, :], ax[:, None], ay[:, None])
    o4 = orient(ax[None, :], ay[None, :], bx[None, :], by[None, :], bx[:, None], by[:, None])
    cross = (o1 * o2 < 0) & (o3 * o4 < 0)
    idx = np.arange(m)
    near = np.abs(idx[:, None] - idx[None, :])
    adjacent = (near <= 1) | (near == m - 1)
    return bool(np.any(cross & ~adjacent))


def _curve_is_jordan(domain: Domain, rho: float, m: int = 512) -> bool:
    w = rho * np.exp(2j * np.pi * np.arange(m) / m)
    z = domain.psi(w)
    if np.any(np.abs(domain.dpsi(w)) < 1e-12 * domain.d):
        return False
    if _segments_cross(z):
        return False
    # simple polygon: positive signed area means counterclockwise, winding once
    zn = np.roll(z, -1)
    area = 0.5 * np.sum(z.real * zn.imag - zn.real * z.imag)
    return bool(area > 0) and bool(np.all(np.abs(zn - z) > 0))


def estimate_r_inner(domain: Domain, step: float = 0.01, margin: float = 0.05,
                     outer: float = 4.0) -> float:
    """Smallest grid radius from which every image circle up to ``outer`` is a
    Jordan curve, plus ``margin``.

    A map analytic on ``|w| > rho`` with a simple pole at infinity whose image
    of ``|w| = rho`` is a Jordan curve is univalent there, so scanning circles
    is a practical stand-in for pairwise injectivity on a 2-D grid.
    """
    for rho in np.arange(1.0, outer + 1e-9, 0.25):
        if not _curve_is_jordan(domain, float(rho)):
            raise ValueError(f"exterior map is not univalent near |w| = {rho:.2f}")
    best = 1.0
    for k in range(int(round(1 / step)) - 1, 0, -1):
        rho = k * step
        if not _curve_is_jordan(domain, rho):
            break
        best = rho
    return best + margin


class Laurent(Domain):
    """General exterior map ``psi(w) = d*w + c0 + sum_j c_j w**-j``."""

    kind = "laurent"

    def __init__(self, d: float, c0: complex = 0.0, tail=()):
        if not d > 0:
            raise ValueError("leading coefficient d must be positive")
        self.d = float(d)
        self.c0 = complex(c0)
        self.tail = np.asarray(tail, dtype=complex).ravel()
        self.r_inner = 0.0
        r = estimate_r_inner(self)
        if r >= 1:
            raise ValueError(f"estimated r_inner = {r:.3f} >= 1: boundary is not a usable analytic Jordan curve")
        self.r_inner = r

    def _inverse_array(self, z, max_iter: int = 100):
        w = (z - self.c0) / self.d
        tol = 1e-12 * (1 + np.abs(z))
        res = self.psi(w) - z
        done = np.abs(res) <= tol
        for _ in range(max_iter):
            if done.all():
                break
            act = ~done
            wa = w[act]
            ra = res[act]
            step = ra / self.dpsi(wa)
            lam = np.ones(len(wa))
            # damping: halve until the residual decreases
            for _ in range(30):
                trial = wa - lam * step
                rt = self.psi(trial) - z[act]
                worse = ~(np.abs(rt) < np.abs(ra))
                if not worse.any():
                    break
                lam[worse] *= 0.5
            w[act] = trial
            res[act] = rt
            done = np.abs(res) <= tol
        w = w.copy()
        w[~done] = np.nan
        return w

    def to_dict(self):
        return {
            "kind": "laurent",
            "d": self.d,
            "c0": [self.c0.real, self.c0.imag],
            "tail": [[c.real, c.imag] for c in self.tail],
        }

    def __repr__(self):
        return f"Laurent(d={self.d}, c0={self.c0}, tail={list(self.tail)})"


def _as_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


def domain_from_dict(d: dict) -> Domain:
    kind = d["kind"]
    if kind == "disk":
        return Disk(_as_complex(d.get("center", 0.0)), float(d.get("radius", 1.0)))
    if kind == "ellipse":
        return Ellipse(float(d["a"]), float(d["b"]))
    if kind == "laurent":
        return Laurent(float(d["d"]), _as_complex(d.get("c0", 0.0)),
                       [_as_complex(c) for c in d.get("tail", [])])
    raise ValueError(f"unknown domain kind {kind!r}")
