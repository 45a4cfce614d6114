import math

import numpy as np
import pytest

from equizeros import bases
from equizeros.bases import (
    IllConditionedBasisError,
    build_basis,
    carleman_ratios,
    faber_polynomial,
    gram_matrix,
)
from equizeros.domains import Disk, Ellipse, Laurent
from equizeros.polyroots import find_roots, from_coefficients

ELLIPSE = Ellipse(2, 1)
ALPHA, BETA = 1.5, 0.5
BLOB = Laurent(1.2, 0.1 + 0.05j, [0.15, 0.05j, -0.03])


def joukowski_faber(n):
    """F_n = p_n / alpha^n with p_{k+1} = z p_k - alpha*beta p_{k-1}, p_1 = z, p_2 = z^2 - 2 alpha beta."""
    if n == 0:
        return np.array([1.0])
    p = [None, np.array([0.0, 1.0]), np.array([-2 * ALPHA * BETA, 0.0, 1.0])]
    for k in range(2, n):
        nxt = np.zeros(k + 2)
        nxt[1:] = p[k]
        nxt[: k] -= ALPHA * BETA * p[k - 1]
        p.append(nxt)
    return p[n] / ALPHA**n


def generating_function_faber(dom, nmax):
    """From psi'(w) / (psi(w) - z) = sum F_n(z) w^(-n-1):
    d F_m = (z - c0) F_{m-1} - sum_{j=1}^{m-1} c_j F_{m-1-j} - (m-1) c_{m-1}."""
    c = np.concatenate(([0], dom.tail, np.zeros(nmax + 1)))
    out = [np.array([1.0 + 0j])]
    for m in range(1, nmax + 1):
        f = np.zeros(m + 1, dtype=complex)
        f[1:] += out[m - 1]
        f[:m] -= dom.c0 * out[m - 1]
        for j in range(1, m):
            f[: m - j] -= c[j] * out[m - 1 - j]
        f[0] -= (m - 1) * c[m - 1]
        out.append(f / dom.d)
    return out


def ellipse_bergman(n, z):
    """Closed form on Ellipse(2,1): foci at +-sqrt(3), R = ((a+b)/c)^2 = 3."""
    c, R = math.sqrt(3), 3.0
    u0, u1 = np.ones_like(z), 2 * z / c
    un = u0 if n == 0 else u1
    for _ in range(2, n + 1):
        u0, u1 = u1, 2 * z / c * u1 - u0
        un = u1
    return 2 * math.sqrt((n + 1) / math.pi) * (R ** (n + 1) - R ** -(n + 1)) ** -0.5 * un / c


class TestFaber:
    @pytest.mark.parametrize("dom", [Disk(0, 1), Disk(0.3 - 0.2j, 1.7), Disk(-2, 0.4)], ids=repr)
    def test_disk_exact(self, dom):
        for n in range(41):
            ref = np.poly1d([1 / dom.radius, -dom.center / dom.radius]) ** n
            ref = ref.coeffs[::-1] if n else np.array([1.0])
            assert np.max(np.abs(faber_polynomial(dom, n) - ref)) <= 1e-12 * max(1, np.abs(ref).max())

    def test_disk_cube(self):
        c, r = 1 + 1j, 2.0
        f = faber_polynomial(Disk(c, r), 3)
        np.testing.assert_allclose(f, [(-c / r) ** 3, 3 * (-c / r) ** 2 / r, 3 * (-c / r) / r**2, 1 / r**3])

    def test_ellipse_second_degree(self):
        np.testing.assert_allclose(faber_polynomial(ELLIPSE, 2), [-1.5 / 2.25, 0, 1 / 2.25], atol=1e-15)

    def test_ellipse_matches_recurrence(self):
        for n in range(41):
            ref = joukowski_faber(n)
            got = faber_polynomial(ELLIPSE, n)
            assert np.max(np.abs(got - ref)) / np.max(np.abs(ref)) <= 1e-10

    def test_laurent_matches_generating_function(self):
        ref = generating_function_faber(BLOB, 30)
        for n in (0, 1, 2, 5, 17, 30):
            got = faber_polynomial(BLOB, n)
            assert np.max(np.abs(got - ref[n])) / np.max(np.abs(ref[n])) <= 1e-10

    @pytest.mark.parametrize("dom", [ELLIPSE, BLOB, Disk(1j, 2)], ids=repr)
    def test_degree_zero(self, dom):
        np.testing.assert_array_equal(faber_polynomial(dom, 0), [1])

    def test_faber_grows_like_phi_power(self):
        # F_n(z) - Phi(z)^n is bounded on L_rho for rho > r_inner
        curve = BLOB.level_curve(1.5, 128)
        for n in (10, 20):
            diff = np.polyval(faber_polynomial(BLOB, n)[::-1], curve.points) - curve.w**n
            assert np.max(np.abs(diff)) < 1.0


class TestOrthonormal:
    def test_bergman_disk_closed_form(self):
        b = build_basis("bergman", Disk(0, 1), 40)
        assert b.column(2)[2] == pytest.approx(math.sqrt(3 / math.pi))
        for n in range(41):
            ref = np.zeros(n + 1)
            ref[n] = math.sqrt((n + 1) / math.pi)
            assert np.max(np.abs(b.column(n) - ref)) <= 1e-8

    def test_szego_disk_closed_form(self):
        b = build_basis("szego", Disk(0, 1), 40)
        assert b.column(1)[1] == pytest.approx(1 / math.sqrt(2 * math.pi))
        for n in range(41):
            ref = np.zeros(n + 1)
            ref[n] = 1 / math.sqrt(2 * math.pi)
            assert np.max(np.abs(b.column(n) - ref)) <= 1e-8

    def test_bergman_ellipse_closed_form(self):
        b = build_basis("bergman", ELLIPSE, 40)
        z = np.array([0.3 + 0.2j, 1.1 - 0.4j, -0.7 + 0.5j, 1.9])
        for n in range(26):
            ref = ellipse_bergman(n, z)
            np.testing.assert_allclose(b.evaluate(n, z), ref, rtol=1e-9)

    @pytest.mark.parametrize("kind,measure", [("szego", "arclength"), ("bergman", "area")])
    @pytest.mark.parametrize("dom", [Disk(0, 1), ELLIPSE, BLOB], ids=repr)
    def test_gram_identity(self, kind, measure, dom):
        b = build_basis(kind, dom, 40)
        g = gram_matrix(b, dom, measure)
        assert np.max(np.abs(g - np.eye(41))) <= 1e-8

    @pytest.mark.parametrize("kind,measure", [("szego", "arclength"), ("bergman", "area")])
    def test_gram_identity_off_center_disk(self, kind, measure):
        # monomial coefficients grow like ((|c| + r) / r)^n here, so stay at moderate n
        dom = Disk(0.5j, 1.3)
        b = build_basis(kind, dom, 30)
        g = gram_matrix(b, dom, measure)
        assert np.max(np.abs(g - np.eye(31))) <= 1e-8

    def test_monomial_gram_on_unit_circle(self):
        b = build_basis("monomial", None, 12)
        g = gram_matrix(b, Disk(0, 1), "arclength")
        np.testing.assert_allclose(g, 2 * np.pi * np.eye(13), atol=1e-12)

    def test_monomial_area_gram_on_unit_disk(self):
        b = build_basis("monomial", None, 12)
        g = gram_matrix(b, Disk(0, 1), "area")
        np.testing.assert_allclose(g, np.diag(np.pi / np.arange(1, 14)), atol=1e-12)

    @pytest.mark.parametrize("kind,measure", [("szego", "arclength"), ("bergman", "area")])
    def test_gram_stable_under_node_doubling(self, kind, measure):
        b = build_basis(kind, ELLIPSE, 30)
        g1 = gram_matrix(b, ELLIPSE, measure, 256)
        g2 = gram_matrix(b, ELLIPSE, measure, 512)
        assert np.max(np.abs(g1 - g2)) <= 1e-10

    @pytest.mark.parametrize("kind", ["szego", "bergman"])
    def test_leading_coefficients_real_positive(self, kind):
        b = build_basis(kind, BLOB, 20)
        lead = np.diag(b.table)
        assert np.all(lead.real > 0)
        assert np.all(np.abs(lead.imag) <= 1e-12 * np.abs(lead))

    def test_quad_node_precondition(self):
        with pytest.raises(ValueError):
            build_basis("szego", ELLIPSE, 40, quad_nodes=100)

    def test_degree_cap(self):
        with pytest.raises(ValueError):
            build_basis("bergman", ELLIPSE, 61)

    def test_ill_conditioning_reported(self, monkeypatch):
        monkeypatch.setattr(bases, "COND_LIMIT", 1.0)
        with pytest.raises(IllConditionedBasisError):
            build_basis("bergman", ELLIPSE, 10)


class TestStructure:
    @pytest.mark.parametrize("kind", bases.BASIS_KINDS)
    def test_triangular_with_nonzero_diagonal(self, kind):
        b = build_basis(kind, ELLIPSE, 25)
        t = b.table
        assert np.all(np.tril(t, -1) == 0)
        diag = np.abs(np.diag(t))
        start = 1 if kind == "shifted-monomial" else 0
        assert np.all(diag[start:] > 0)

    def test_shifted_degenerate_at_zero(self):
        b = build_basis("shifted-monomial", None, 5)
        assert b.degenerate_at_zero
        assert np.all(b.column(0) == 0)
        np.testing.assert_array_equal(b.column(3), [-1, 0, 0, 1])

    @pytest.mark.parametrize("kind", ["faber", "szego", "bergman"])
    def test_roots_inside_boundary(self, kind):
        b = build_basis(kind, ELLIPSE, 30)
        for n in range(5, 31):
            roots = find_roots(from_coefficients(b.column(n))).roots
            g = ELLIPSE.green_array(roots)
            assert np.all(~np.isfinite(g) | (g < 0))

    def test_header(self):
        h = build_basis("szego", ELLIPSE, 10).to_header()
        assert h["kind"] == "szego" and h["nmax"] == 10 and h["quad_nodes"] == 256
        assert h["domain"]["kind"] == "ellipse"

    def test_combine_matches_dense_product(self):
        rng = np.random.default_rng(0)
        a = rng.standard_normal(21) + 1j * rng.standard_normal(21)
        for kind in bases.BASIS_KINDS:
            for dom in (Disk(0, 2), Disk(1, 0.5), ELLIPSE):
                b = build_basis(kind, dom, 20)
                c, s = b.combine(np.log(np.abs(a)), a / np.abs(a), 20)
                np.testing.assert_allclose(c * np.exp(s), b.table @ a, rtol=1e-12, atol=1e-12 * np.abs(b.table @ a).max())


class TestCarleman:
    def test_bergman_disk_constant(self):
        b = build_basis("bergman", Disk(0, 1), 30)
        for rho in (1.0, 1.7):
            rep = carleman_ratios(b, Disk(0, 1), rho, range(1, 31))
            for n, lo, hi in rep.per_degree:
                expect = math.sqrt((n + 1) / (math.pi * n))
                assert lo == pytest.approx(expect, rel=1e-10)
                assert hi == pytest.approx(expect, rel=1e-10)

    def test_faber_disk_unit(self):
        b = build_basis("faber", Disk(0, 1), 30)
        rep = carleman_ratios(b, Disk(0, 1), 2.0, range(1, 31))
        for _, lo, hi in rep.per_degree:
            assert lo == pytest.approx(1, rel=1e-12) and hi == pytest.approx(1, rel=1e-12)

    def test_bergman_ellipse_envelope(self):
        b = build_basis("bergman", ELLIPSE, 40)
        rep = carleman_ratios(b, ELLIPSE, 1.2, range(10, 41))
        assert all(0 < lo <= hi for _, lo, hi in rep.per_degree)
        assert rep.envelope_ratio <= 10
