"""Polynomial bases as lower-triangular monomial coefficient tables.

Column ``k`` of ``PolynomialBasis.table`` holds the coefficients of ``B_k`` in
powers ``z**0 .. z**k``.

Szego and Bergman polynomials are built by Gram-Schmidt in Arnoldi form: the
next candidate is ``z * q_k`` rather than ``z**(k+1)``.  Both span the same
space, so the orthonormal polynomials (normalised to a positive leading
coefficient) are identical, but the Arnoldi vectors stay well conditioned on
non-circular boundaries where raw monomials do not.  Inner products use the
periodic trapezoid rule on ``psi(e^{i theta})``; area integrals are turned into
boundary integrals with Green's formula, the antiderivative being computed
spectrally along the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domains import Disk, Domain, LevelCurve

__all__ = [
    "BASIS_KINDS",
    "IllConditionedBasisError",
    "PolynomialBasis",
    "CarlemanReport",
    "build_basis",
    "faber_polynomial",
    "gram_matrix",
    "carleman_ratios",
    "default_quad_nodes",
    "horner",
]

BASIS_KINDS = ("monomial", "shifted-monomial", "faber", "szego", "bergman")

FABER_GUARD = 8
ORTHO_NMAX_CAP = 60
COND_LIMIT = 1e12
# dense tables above this size are not materialised for closed-form kinds
DENSE_LIMIT = 2048


class IllConditionedBasisError(RuntimeError):
    pass


def default_quad_nodes(nmax: int) -> int:
    return max(4 * nmax + 16, 256)


def horner(coeffs: np.ndarray, z) -> np.ndarray:
    """Plain Horner evaluation of ``sum coeffs[j] z**j``."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


# -- truncated power series in t = 1/z ---------------------------------------

def _series_mul(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    return np.convolve(a, b)[: order + 1]


def _series_reciprocal(a: np.ndarray, order: int) -> np.ndarray:
    # a[0] must be nonzero
    out = np.zeros(order + 1, dtype=complex)
    out[0] = 1.0 / a[0]
    for k in range(1, order + 1):
        m = min(k, len(a) - 1)
        out[k] = -np.dot(a[1 : m + 1], out[k - 1 :: -1][:m]) / a[0]
    return out


def _phi_series(domain: Domain, order: int) -> np.ndarray:
    """Coefficients of ``1 + u(t)`` where ``phi(z) = (z/d) (1 + u(1/z))``.

    Solves ``u = -c0 t - sum_j c_j d^j t^(j+1) (1+u)^(-j)`` by fixed-point
    iteration; each sweep fixes at least one more coefficient.
    """
    d, c0, tail = domain.d, domain.c0, domain.tail
    one_u = np.zeros(order + 1, dtype=complex)
    one_u[0] = 1.0
    for _ in range(order + 1):
        new = np.zeros(order + 1, dtype=complex)
        new[0] = 1.0
        if order >= 1:
            new[1] -= c0
        if len(tail):
            inv = _series_reciprocal(one_u, order)
            power = np.ones(1, dtype=complex)
            for j, cj in enumerate(tail, start=1):
                power = _series_mul(power, inv, order)
                shift = j + 1
                if shift > order:
                    break
                new[shift:] -= cj * d ** j * power[: order + 1 - shift]
        if np.array_equal(new, one_u):
            break
        one_u = new
    return one_u


def _faber_table(domain: Domain, nmax: int) -> np.ndarray:
    order = nmax + FABER_GUARD
    base = _phi_series(domain, order)
    table = np.zeros((nmax + 1, nmax + 1), dtype=complex)
    table[0, 0] = 1.0
    power = np.ones(1, dtype=complex)
    for n in range(1, nmax + 1):
        power = _series_mul(power, base, order)
        # polynomial part of (z/d)^n (1+u)^n: z^j coefficient is d^-n [t^(n-j)]
        table[: n + 1, n] = power[: n + 1][::-1] / domain.d ** n
    return table


def faber_polynomial(domain: Domain, n: int) -> np.ndarray:
    """Monomial coefficients of the n-th Faber polynomial of ``domain``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if isinstance(domain, Disk):
        return _disk_faber_column(domain, n)
    return _faber_table(domain, n)[: n + 1, n].copy()


def _disk_faber_column(domain: Disk, n: int) -> np.ndarray:
    # ((z - c)/r)^n
    out = np.ones(1, dtype=complex)
    lin = np.array([-domain.center / domain.radius, 1.0 / domain.radius], dtype=complex)
    for _ in range(n):
        out = np.convolve(out, lin)
    return out


# -- quadrature on the boundary ---------------------------------------------

@dataclass
class _BoundaryRule:
    z: np.ndarray
    dz_dtheta: np.ndarray
    ds: np.ndarray  # arclength weights including 2*pi/N

    @classmethod
    def on(cls, domain: Domain, nodes: int) -> "_BoundaryRule":
        w = np.exp(2j * np.pi * np.arange(nodes) / nodes)
        dpsi = domain.dpsi(w)
        h = 2 * np.pi / nodes
        return cls(domain.psi(w), 1j * w * dpsi, np.abs(dpsi) * h)

    @property
    def h(self) -> float:
        return 2 * np.pi / len(self.z)

    def antiderivative(self, g: np.ndarray) -> np.ndarray:
        """Values of a primitive of ``g`` along the boundary (up to a constant)."""
        f = np.fft.fft(g * self.dz_dtheta)
        m = np.fft.fftfreq(len(g), d=1.0 / len(g))
        out = np.zeros_like(f)
        nz = m != 0
        out[nz] = f[nz] / (1j * m[nz])
        return np.fft.ifft(out)

    def area_pairing(self, f: np.ndarray, prim_g: np.ndarray) -> np.ndarray:
        """``<f, g>_area`` given boundary values of f and of a primitive of g.

        Green's formula: the integral over the domain of f conj(g) dA equals
        (1/2i) times the contour integral of f conj(G) dz with G' = g.
        """
        return (f * self.dz_dtheta) @ np.conj(prim_g).T * self.h / 2j


def _orthonormal_arnoldi(domain: Domain, nmax: int, measure: str, nodes: int) -> np.ndarray:
    rule = _BoundaryRule.on(domain, nodes)
    z = rule.z
    table = np.zeros((nmax + 1, nmax + 1), dtype=complex)
    vals = np.zeros((nmax + 1, nodes), dtype=complex)
    prims = np.zeros((nmax + 1, nodes), dtype=complex) if measure == "area" else None

    def selfnorm(v, prim=None):
        if measure == "arclength":
            return math.sqrt(float(np.sum(np.abs(v) ** 2 * rule.ds)))
        val = rule.area_pairing(v, prim)
        return math.sqrt(max(float(val.real), 0.0))

    def project(v, k):
        # inner products <v, q_j> for j <= k
        if measure == "arclength":
            return (np.conj(vals[: k + 1]) * rule.ds) @ v
        return rule.area_pairing(v, prims[: k + 1])

    one = np.ones(nodes, dtype=complex)
    norm0 = selfnorm(one, rule.antiderivative(one) if measure == "area" else None)
    vals[0] = one / norm0
    table[0, 0] = 1.0 / norm0
    if measure == "area":
        prims[0] = rule.antiderivative(vals[0])

    for k in range(nmax):
        v = z * vals[k]
        coef = np.zeros(nmax + 1, dtype=complex)
        coef[1 : k + 2] = table[: k + 1, k]
        start = selfnorm(v, rule.antiderivative(v) if measure == "area" else None)
        for _ in range(2):
            h = project(v, k)
            v = v - h @ vals[: k + 1]
            coef = coef - table[:, : k + 1] @ h
        prim = rule.antiderivative(v) if measure == "area" else None
        nrm = selfnorm(v, prim)
        if nrm == 0 or (start / nrm) ** 2 > COND_LIMIT:
            raise IllConditionedBasisError(
                f"Gram-Schmidt lost independence at degree {k + 1}: raise quad_nodes or lower nmax"
            )
        vals[k + 1] = v / nrm
        table[:, k + 1] = coef / nrm
        if measure == "area":
            prims[k + 1] = prim / nrm
    return table


@dataclass
class PolynomialBasis:
    kind: str
    nmax: int
    domain: Domain | None = None
    quad_nodes: int | None = None
    _table: np.ndarray | None = field(default=None, repr=False)

    @property
    def degenerate_at_zero(self) -> bool:
        return self.kind == "shifted-monomial"

    @property
    def _disk_faber_scaled(self) -> bool:
        return self.kind == "faber" and isinstance(self.domain, Disk) and self.domain.center == 0

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            n = self.nmax
            if n + 1 > DENSE_LIMIT:
                raise MemoryError(f"dense table for nmax={n} not materialised; use combine()")
            if self.kind == "monomial":
                t = np.eye(n + 1, dtype=complex)
            elif self.kind == "shifted-monomial":
                t = np.eye(n + 1, dtype=complex)
                t[0, :] = -1.0
                t[0, 0] = 0.0
            elif self.kind == "faber":
                t = np.zeros((n + 1, n + 1), dtype=complex)
                for k in range(n + 1):
                    t[: k + 1, k] = _disk_faber_column(self.domain, k)
            else:
                raise AssertionError("orthonormal tables are built eagerly")
            self._table = t
        return self._table

    def column(self, k: int) -> np.ndarray:
        if k > self.nmax:
            raise ValueError(f"degree {k} exceeds nmax = {self.nmax}")
        if self.kind == "monomial":
            c = np.zeros(k + 1, dtype=complex)
            c[k] = 1
            return c
        if self.kind == "shifted-monomial":
            c = np.zeros(k + 1, dtype=complex)
            c[k] += 1
            c[0] -= 1
            return c
        if self.kind == "faber" and isinstance(self.domain, Disk) and self._table is None:
            return _disk_faber_column(self.domain, k)
        return self.table[: k + 1, k].copy()

    def leading(self, k: int) -> complex:
        return complex(self.column(k)[k])

    def evaluate(self, k: int, z) -> np.ndarray:
        return horner(self.column(k), z)

    def combine(self, log_abs: np.ndarray, phase: np.ndarray, n: int) -> tuple[np.ndarray, float]:
        """Monomial coefficients of ``sum_{k<=n} A_k B_k`` as ``(c, s)`` with true
        coefficients ``c * exp(s)``; the ``A_k`` arrive in log-modulus form."""
        if n > self.nmax:
            raise ValueError(f"n = {n} exceeds basis nmax = {self.nmax}")
        la = np.asarray(log_abs[: n + 1], dtype=float)
        ph = np.asarray(phase[: n + 1], dtype=complex)
        if self._disk_faber_scaled:
            la = la - np.arange(n + 1) * math.log(self.domain.radius)
        finite = la[np.isfinite(la)]
        if len(finite) == 0:
            return np.zeros(n + 1, dtype=complex), 0.0
        s = float(finite.max())
        with np.errstate(under="ignore"):
            a = np.exp(la - s) * ph
        if self.kind == "monomial" or self._disk_faber_scaled:
            return a, s
        if self.kind == "shifted-monomial":
            c = a.copy()
            c[0] = -np.sum(a[1:])
            return c, s
        return self.table[: n + 1, : n + 1] @ a, s

    def to_header(self) -> dict:
        return {
            "kind": self.kind,
            "nmax": self.nmax,
            "quad_nodes": self.quad_nodes,
            "domain": self.domain.to_dict() if self.domain is not None else None,
        }


def build_basis(kind: str, domain: Domain | None = None, nmax: int = 20,
                quad_nodes: int | None = None, ortho_cap: int = ORTHO_NMAX_CAP) -> PolynomialBasis:
    """Construct one of the five basis families up to degree ``nmax``.

    Szego and Bergman tables are refused above ``ortho_cap``: their monomial
    coefficients grow so fast that assembled polynomials lose all accuracy.
    """
    if kind not in BASIS_KINDS:
        raise ValueError(f"unknown basis kind {kind!r}")
    if nmax < 1:
        raise ValueError("nmax must be >= 1")
    if kind in ("monomial", "shifted-monomial"):
        return PolynomialBasis(kind, nmax, domain)
    if domain is None:
        raise ValueError(f"{kind} basis needs a domain")
    if kind == "faber":
        if isinstance(domain, Disk):
            return PolynomialBasis(kind, nmax, domain)
        return PolynomialBasis(kind, nmax, domain, None, _faber_table(domain, nmax))
    if nmax > ortho_cap:
        raise ValueError(f"{kind} basis capped at nmax = {ortho_cap} (got {nmax})")
    nodes = quad_nodes if quad_nodes is not None else default_quad_nodes(nmax)
    if nodes < 4 * nmax + 16:
        raise ValueError(f"quad_nodes must be >= 4*nmax + 16 = {4 * nmax + 16}")
    measure = "arclength" if kind == "szego" else "area"
    table = _orthonormal_arnoldi(domain, nmax, measure, nodes)
    return PolynomialBasis(kind, nmax, domain, nodes, table)


def gram_matrix(basis: PolynomialBasis, domain: Domain, measure: str,
                quad_nodes: int | None = None) -> np.ndarray:
    """``<B_j, B_k>`` for the arclength or area measure, evaluated from the table.

    This path works from the coefficients alone (area primitives are exact
    coefficient shifts), independent of the construction's quadrature.
    """
    if measure not in ("arclength", "area"):
        raise ValueError("measure must be 'arclength' or 'area'")
    n = basis.nmax
    nodes = quad_nodes if quad_nodes is not None else default_quad_nodes(n)
    rule = _BoundaryRule.on(domain, nodes)
    table = basis.table
    vander = rule.z[:, None] ** np.arange(n + 2)[None, :]
    values = vander[:, : n + 1] @ table
    if measure == "arclength":
        return (values * rule.ds[:, None]).T @ np.conj(values)
    prim_table = np.zeros((n + 2, n + 1), dtype=complex)
    prim_table[1:, :] = table / np.arange(1, n + 2)[:, None]
    prims = vander @ prim_table
    return (values * rule.dz_dtheta[:, None]).T @ np.conj(prims) * rule.h / 2j


@dataclass
class CarlemanReport:
    rho: float
    per_degree: list[tuple[int, float, float]]

    @property
    def envelope_ratio(self) -> float:
        lo = min(r[1] for r in self.per_degree)
        hi = max(r[2] for r in self.per_degree)
        return hi / lo


def carleman_ratios(basis: PolynomialBasis, domain: Domain, rho: float, n_range,
                    nodes: int = 256) -> CarlemanReport:
    """Min/max over ``L_rho`` of ``|B_n| / (sqrt(n) rho^n)`` (Bergman) or
    ``|B_n| / rho^n`` (other bases)."""
    curve: LevelCurve = domain.level_curve(rho, nodes)
    rows = []
    for n in n_range:
        vals = np.abs(basis.evaluate(n, curve.points))
        denom = rho ** n * (math.sqrt(n) if basis.kind == "bergman" else 1.0)
        ratio = vals / denom
        rows.append((int(n), float(ratio.min()), float(ratio.max())))
    return CarlemanReport(rho, rows)
