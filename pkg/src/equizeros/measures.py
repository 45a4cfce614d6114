"""Equidistribution diagnostics for root sets.

The equilibrium measure is the push-forward of the uniform law on the unit
circle under ``psi``, so pulling roots back through ``phi`` turns the
comparison into two one-dimensional checks: the angles of ``phi(Z_k)`` should
be uniform (star discrepancy) and the moduli should be close to 1 (band mass).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .domains import Domain
from .polyroots import MonomialPolynomial, RootSet, log_abs_values

__all__ = [
    "EquiStats",
    "pushforward",
    "pushforward_angles",
    "star_discrepancy",
    "equi_stats",
    "collapse_detect",
    "lognorm_profile",
    "LognormProfile",
]


def _roots_array(roots) -> np.ndarray:
    if isinstance(roots, RootSet):
        roots = roots.roots
    return np.atleast_1d(np.asarray(roots, dtype=complex))


def pushforward(roots, domain: Domain) -> np.ndarray:
    """``phi(Z_k)`` for every root; NaN where the root is inside ``L_{r_inner}``."""
    return domain.inverse_map_array(_roots_array(roots))


def pushforward_angles(roots, domain: Domain) -> tuple[np.ndarray, int]:
    w = pushforward(roots, domain)
    ok = np.isfinite(w)
    angles = np.mod(np.angle(w[ok]), 2 * np.pi)
    return angles, int((~ok).sum())


def star_discrepancy(angles) -> float:
    """``sup_t |#{theta_k < t}/n - t/(2 pi)|`` over anchored arcs ``[0, t)``."""
    a = np.asarray(angles, dtype=float)
    if a.size == 0:
        raise ValueError("star discrepancy of an empty sample")
    u = np.sort(np.mod(a, 2 * np.pi) / (2 * np.pi))
    n = len(u)
    j = np.arange(1, n + 1)
    return float(max(np.max(j / n - u), np.max(u - (j - 1) / n)))


@dataclass
class EquiStats:
    n: int
    angular_discrepancy: float
    radial_mean_dev: float
    band_mass: float
    epsilon: float
    interior_mass: float
    max_root_modulus: float

    def to_dict(self) -> dict:
        return asdict(self)


def equi_stats(roots, domain: Domain, epsilon: float = 0.1) -> EquiStats:
    """Angular discrepancy, radial deviation and band/interior masses of ``phi(roots)``.

    Interior roots (``phi`` undefined) are never in the band.  With no
    exterior root at all the discrepancy is reported as 1.
    """
    if not 0 < epsilon < 0.5:
        raise ValueError("epsilon must lie in (0, 0.5)")
    z = _roots_array(roots)
    n = len(z)
    if n == 0:
        raise ValueError("no roots")
    w = pushforward(z, domain)
    ok = np.isfinite(w)
    mod = np.abs(w[ok])
    if ok.any():
        disc = star_discrepancy(np.angle(w[ok]))
        radial = float(np.mean(np.abs(mod - 1)))
        max_mod = float(mod.max())
    else:
        disc, radial, max_mod = 1.0, 0.0, 0.0
    band = float(np.count_nonzero(np.abs(mod - 1) <= epsilon)) / n
    return EquiStats(n, disc, radial, band, epsilon, float((~ok).sum()) / n, max_mod)


def collapse_detect(roots, domain: Domain, rho: float = 0.9) -> bool:
    """True when every root is interior or has ``|phi(Z)| <= rho``."""
    if not domain.r_inner < rho < 1:
        raise ValueError(f"need r_inner < rho < 1, got rho = {rho}")
    w = pushforward(roots, domain)
    ok = np.isfinite(w)
    return bool(np.all(np.abs(w[ok]) <= rho))


@dataclass
class LognormProfile:
    mean_dev: float
    max_dev: float
    skipped: int
    max_log_norm: float  # max over the curve of (1/n) log |P|


def lognorm_profile(poly: MonomialPolynomial, domain: Domain, R: float = 1.5,
                    m: int = 256) -> LognormProfile:
    """Deviation of ``(1/n) log |P_n|`` from ``log R`` on the level curve ``L_R``.

    ``n`` is the nominal degree.  Nodes where ``P_n`` vanishes are skipped.
    """
    if R < 1:
        raise ValueError("R must be >= 1")
    curve = domain.level_curve(R, m)
    n = poly.n
    if n < 1:
        raise ValueError("need a polynomial of nominal degree >= 1")
    lv = log_abs_values(poly, curve.points) / n
    ok = np.isfinite(lv)
    dev = np.abs(lv[ok] - math.log(R))
    if not ok.any():
        return LognormProfile(math.inf, math.inf, int(m), -math.inf)
    return LognormProfile(float(dev.mean()), float(dev.max()), int((~ok).sum()), float(lv[ok].max()))
