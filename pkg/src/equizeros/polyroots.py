"""Assembly of ``P_n = sum A_k B_k`` in scaled monomial form, evaluation, and zeros."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .bases import PolynomialBasis
from .domains import Domain
from .ensembles import CoefficientSequence

__all__ = [
    "DegeneratePolynomialError",
    "RepresentationInvalidError",
    "MonomialPolynomial",
    "RootSet",
    "assemble",
    "from_coefficients",
    "evaluate",
    "evaluate_many",
    "find_roots",
    "initial_guesses",
    "recover_coefficient",
    "monic_reduce",
    "log_abs_constant_ratio",
]

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


class DegeneratePolynomialError(ValueError):
    pass


class RepresentationInvalidError(ValueError):
    pass


@dataclass
class MonomialPolynomial:
    """``sum_k coeffs[k] z^k`` times ``exp(scale_exp)``, with ``max |coeffs| = 1``.

    ``len(coeffs) - 1`` is the nominal degree n; ``degree`` is the index of the
    highest nonzero coefficient, which is lower when the top term underflows.
    """

    coeffs: np.ndarray
    scale_exp: float
    degree: int

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1


@dataclass
class RootSet:
    roots: np.ndarray
    max_residual: float
    iterations: int
    converged: bool
    tol: float

    def certificate(self) -> dict:
        return {
            "degree": int(len(self.roots)),
            "maxResidual": float(self.max_residual),
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
            "tol": float(self.tol),
        }


def from_coefficients(c, scale_exp: float = 0.0) -> MonomialPolynomial:
    """Normalise raw monomial coefficients into a :class:`MonomialPolynomial`.

    Coefficients below the smallest normal double (relative to the largest)
    are flushed to zero.
    """
    c = np.asarray(c, dtype=complex)
    mags = np.abs(c)
    m = float(mags.max()) if len(c) else 0.0
    if not (m > 1e-300) or not math.isfinite(m):
        raise DegeneratePolynomialError("polynomial is identically zero (or not finite)")
    c = c / m
    # subnormal entries have lost their relative precision; treat them as zero
    c[np.abs(c) < np.finfo(float).tiny] = 0
    nz = np.flatnonzero(c)
    return MonomialPolynomial(c, float(scale_exp + math.log(m)), int(nz[-1]))


def assemble(coeffs: CoefficientSequence, basis: PolynomialBasis, n: int) -> MonomialPolynomial:
    """Monomial form of ``sum_{k<=n} A_k B_k`` with a shared log-scale exponent."""
    if n >= len(coeffs):
        raise ValueError(f"need at least n+1 = {n + 1} coefficients, have {len(coeffs)}")
    c, s = basis.combine(coeffs.log_abs, coeffs.phase, n)
    return from_coefficients(c, s)


def evaluate(poly: MonomialPolynomial, z: complex) -> tuple[complex, float]:
    """``p(z)`` as ``(value, log_scale)`` with ``p(z) = value * exp(log_scale)``."""
    p, _, _, ls = _kernels.scaled_horner(poly.coeffs, complex(z))
    return complex(p), float(ls + poly.scale_exp)


def evaluate_many(poly: MonomialPolynomial, zs) -> tuple[np.ndarray, np.ndarray]:
    zs = np.ascontiguousarray(np.atleast_1d(zs), dtype=np.complex128)
    vals, logs, _ = _kernels.scaled_eval_many(poly.coeffs, zs)
    return vals, logs + poly.scale_exp


def log_abs_values(poly: MonomialPolynomial, zs) -> np.ndarray:
    vals, logs = evaluate_many(poly, zs)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(vals)) + logs


def _upper_hull(x: np.ndarray, y: np.ndarray) -> list[int]:
    hull: list[int] = []
    for i in range(len(x)):
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            # drop b if it lies on or below the chord a -> i
            if (y[b] - y[a]) * (x[i] - x[a]) <= (y[i] - y[a]) * (x[b] - x[a]):
                hull.pop()
            else:
                break
        hull.append(i)
    return hull


def initial_guesses(c: np.ndarray) -> np.ndarray:
    """Starting points on circles read off the Newton polygon of ``log|c_k|``.

    Each hull edge from k_i to k_j contributes ``k_j - k_i`` points on a circle
    of radius ``(|c_{k_i}| / |c_{k_j}|)^(1/(k_j - k_i))``; successive circles
    are rotated by the golden angle.
    """
    n = len(c) - 1
    mags = np.abs(c)
    ks = np.flatnonzero(mags > 0)
    with np.errstate(divide="ignore"):
        logs = np.log(mags[ks])
    hull = [ks[i] for i in _upper_hull(ks.astype(float), logs)]
    out = np.empty(n, dtype=complex)
    pos = 0
    lookup = dict(zip(ks.tolist(), logs.tolist()))
    for seg, (k0, k1) in enumerate(zip(hull[:-1], hull[1:])):
        count = k1 - k0
        radius = math.exp((lookup[k0] - lookup[k1]) / count)
        offset = 0.7 + seg * GOLDEN_ANGLE
        angles = 2 * np.pi * np.arange(count) / count + offset
        out[pos : pos + count] = radius * np.exp(1j * angles)
        pos += count
    return out


REFINE_MAX_DEGREE = 512


def find_roots(poly: MonomialPolynomial, tol: float = 1e-10, max_iter: int = 200,
               refine: bool | None = None) -> RootSet:
    """All zeros of ``poly`` by simultaneous Aberth-Ehrlich iteration.

    Trailing zero coefficients are exact roots at the origin and are split off
    first.  With ``refine`` (default: degree <= 512) a few extra corrections
    use compensated evaluation, so each root ends up about as accurate as its
    conditioning with respect to the double-precision coefficients allows.
    ``max_residual`` is the largest relative backward residual
    ``|p(z)| / sum |c_k| |z|^k`` over the returned roots.
    """
    deg = poly.degree
    if deg < 1:
        raise ValueError("need degree >= 1")
    c = poly.coeffs[: deg + 1]
    low = int(np.flatnonzero(c)[0])
    zeros = np.zeros(low, dtype=complex)
    work = np.ascontiguousarray(c[low:] / np.max(np.abs(c[low:])))
    if len(work) == 1:
        return RootSet(zeros, 0.0, 0, True, tol)
    if len(work) == 2:
        roots = np.array([-work[0] / work[1]])
        iters, done = 1, np.array([True])
    else:
        roots = initial_guesses(work)
        iters, done = _kernels.aberth(work, roots, tol, max_iter)
        if refine if refine is not None else len(work) - 1 <= REFINE_MAX_DEGREE:
            _kernels.refine(work, roots, 3)
    res = _kernels.relative_residuals(work, roots)
    max_res = float(res.max()) if len(res) else 0.0
    converged = bool(done.all()) and max_res <= tol and bool(np.all(np.isfinite(roots)))
    return RootSet(np.concatenate((zeros, roots)), max_res, int(iters), converged, tol)


def recover_coefficient(poly: MonomialPolynomial, basis: PolynomialBasis, domain: Domain,
                        n: int, R: float, m: int | None = None) -> complex:
    """Estimate ``A_n`` by trapezoidal quadrature of ``P_n / (z B_n)`` over ``L_R``."""
    if not R > 1:
        raise RepresentationInvalidError("R must exceed 1")
    log_r = math.log(R)
    bn = basis.column(n)
    bpoly = from_coefficients(bn)
    if bpoly.degree >= 1:
        broots = find_roots(bpoly).roots
        g = domain.green_array(broots)
        if np.any(np.isfinite(g) & (g >= log_r)):
            raise RepresentationInvalidError(f"a zero of B_{n} lies on or outside L_R")
    g0 = domain.green_array(np.array([0j]))[0]
    if np.isfinite(g0) and g0 >= log_r:
        raise RepresentationInvalidError("the origin must lie inside L_R")
    nodes = m if m is not None else max(8 * n, 512)
    curve = domain.level_curve(R, nodes)
    vals, logs = evaluate_many(poly, curve.points)
    bvals = basis.evaluate(n, curve.points)
    # (1/2 pi i) * sum f(z) psi'(w) i w dtheta
    integrand = vals / (curve.points * bvals) * curve.deriv_samples * curve.w
    top = logs.max()
    est = np.sum(integrand * np.exp(logs - top)) / nodes
    with np.errstate(over="ignore", invalid="ignore"):
        return complex(est * np.exp(top))


def monic_reduce(poly: MonomialPolynomial) -> MonomialPolynomial:
    """Divide by the leading coefficient (``Q_n`` of the monic reduction)."""
    deg = poly.degree
    lead = poly.coeffs[deg]
    if deg < 1 or lead == 0:
        raise ValueError("monic reduction needs degree >= 1 and a nonzero leading coefficient")
    c = poly.coeffs[: deg + 1] * (abs(lead) / lead)
    # true coefficients are c_k / lead, max |c_k| = 1 so the scale is 1/|lead|
    return MonomialPolynomial(c, -math.log(abs(lead)), deg)


def log_abs_constant_ratio(poly: MonomialPolynomial) -> float:
    """``log |Q_n(0)|`` for the monic reduction, computed without forming Q_n."""
    c0 = abs(poly.coeffs[0])
    lead = abs(poly.coeffs[poly.degree])
    if c0 == 0:
        return -math.inf
    return math.log(c0) - math.log(lead)
