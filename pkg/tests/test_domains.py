import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equizeros.domains import Disk, Ellipse, InteriorPointError, Laurent, domain_from_dict
from equizeros.measures import star_discrepancy

# a genuinely non-elliptic analytic boundary
BLOB = Laurent(1.2, 0.1 + 0.05j, [0.15, 0.05j, -0.03])
DOMAINS = [Disk(0.5 - 0.25j, 2.0), Ellipse(2, 1), BLOB]


class TestExteriorMap:
    def test_disk(self):
        assert Disk(0, 2).exterior_map(1) == 2

    def test_ellipse_vertices(self):
        e = Ellipse(2, 1)
        assert e.exterior_map(1) == pytest.approx(2)
        assert e.exterior_map(1j) == pytest.approx(1j)

    def test_rejects_inner_points(self):
        e = Ellipse(2, 1)
        with pytest.raises(InteriorPointError):
            e.exterior_map(0.5 * e.r_inner)

    def test_capacity(self):
        assert Disk(1, 3).capacity == 3
        assert Ellipse(2, 1).capacity == 1.5
        assert BLOB.capacity == 1.2

    @pytest.mark.parametrize("dom", DOMAINS, ids=repr)
    def test_capacity_from_far_field(self, dom):
        w = 1e6 * cmath.exp(0.3j)
        assert abs(dom.exterior_map(w) / w) == pytest.approx(dom.capacity, rel=1e-4)

    def test_ellipse_reduces_to_disk(self):
        w = np.array([1.3 + 0.2j, -2.0, 0.1 + 1.9j])
        np.testing.assert_allclose(Ellipse(1.5, 1.5).psi(w), Disk(0, 1.5).psi(w), atol=1e-15)
        np.testing.assert_allclose(Ellipse(1.5, 1.5).inverse_map_array(w), w / 1.5, atol=1e-14)

    @pytest.mark.parametrize("dom", DOMAINS, ids=repr)
    def test_derivative_matches_finite_difference(self, dom):
        w = 1.4 * np.exp(1j * np.linspace(0, 6, 7))
        h = 1e-6
        fd = (dom.psi(w + h) - dom.psi(w - h)) / (2 * h)
        np.testing.assert_allclose(dom.dpsi(w), fd, atol=1e-8)


class TestInverse:
    def test_disk_identity(self):
        assert Disk(0, 1).inverse_map(3) == 3

    def test_ellipse_vertex(self):
        assert Ellipse(2, 1).inverse_map(2) == pytest.approx(1)

    @pytest.mark.parametrize("dom", DOMAINS, ids=repr)
    def test_round_trip_on_grid(self, dom):
        r, t = np.meshgrid(np.linspace(1.05, 3, 15), np.linspace(0, 2 * np.pi, 40, endpoint=False))
        w = (r * np.exp(1j * t)).ravel()
        np.testing.assert_allclose(dom.inverse_map_array(dom.psi(w)), w, atol=1e-10)

    @pytest.mark.parametrize("dom", DOMAINS, ids=repr)
    def test_round_trip_point(self, dom):
        w = 1.7 * cmath.exp(1j)
        assert abs(dom.inverse_map(dom.exterior_map(w)) - w) <= 1e-10

    def test_focal_segment_is_interior(self):
        e = Ellipse(2, 1)
        with pytest.raises(InteriorPointError):
            e.inverse_map(0.5)
        assert np.isnan(e.inverse_map_array([0.0])[0])

    @settings(max_examples=60, deadline=None)
    @given(st.floats(1.01, 5.0), st.floats(0, 2 * math.pi))
    def test_round_trip_property(self, rho, theta):
        for dom in DOMAINS:
            w = rho * cmath.exp(1j * theta)
            assert abs(dom.inverse_map(dom.exterior_map(w)) - w) <= 1e-9 * rho


class TestGreen:
    def test_disk(self):
        assert Disk(0, 1).green_function(2) == pytest.approx(math.log(2))
        for r in (0.3, 1, 7):
            assert Disk(0, r).green_function(2 * r) == pytest.approx(math.log(2))

    def test_zero_on_ellipse_boundary(self):
        e = Ellipse(2, 1)
        for t in np.linspace(0, 2 * np.pi, 13):
            assert abs(e.green_function(2 * math.cos(t) + 1j * math.sin(t))) <= 1e-8

    @pytest.mark.parametrize("dom", DOMAINS, ids=repr)
    def test_positive_outside(self, dom):
        z = dom.level_curve(1.2, 64).points
        assert np.all(dom.green_array(z) > 0)


class TestLevelCurve:
    def test_disk_four_points(self):
        c = Disk(0, 1).level_curve(2, 8)
        np.testing.assert_allclose(c.points[::2], [2, 2j, -2, -2j], atol=1e-15)

    def test_ellipse_boundary_identity(self):
        p = Ellipse(2, 1).level_curve(1, 100).points
        np.testing.assert_allclose((p.real / 2) ** 2 + p.imag**2, 1, atol=1e-10)

    @pytest.mark.parametrize("dom", DOMAINS, ids=repr)
    @pytest.mark.parametrize("rho", [1.0, 1.3, 2.5])
    def test_green_equals_log_rho(self, dom, rho):
        c = dom.level_curve(rho, 128)
        np.testing.assert_allclose(dom.green_array(c.points), math.log(rho), atol=1e-8)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            Ellipse(2, 1).level_curve(0.1, 64)
        with pytest.raises(ValueError):
            Disk(0, 1).level_curve(1.0, 4)


class TestEquilibriumSample:
    def test_disk_unit_modulus(self):
        z = Disk(0, 1).equilibrium_sample(500, 1)
        np.testing.assert_allclose(np.abs(z), 1, atol=1e-15)

    def test_on_ellipse(self):
        z = Ellipse(2, 1).equilibrium_sample(500, 2)
        np.testing.assert_allclose((z.real / 2) ** 2 + z.imag**2, 1, atol=1e-10)

    def test_pulled_back_angles_uniform(self):
        m = 4096
        for dom in DOMAINS:
            w = dom.inverse_map_array(dom.equilibrium_sample(m, 5))
            assert star_discrepancy(np.angle(w)) <= 2 / math.sqrt(m)

    def test_reproducible(self):
        a = Ellipse(2, 1).equilibrium_sample(10, 3)
        b = Ellipse(2, 1).equilibrium_sample(10, 3)
        assert a.tobytes() == b.tobytes()


class TestInnerRadius:
    def test_closed_forms(self):
        assert Disk(0, 1).r_inner == 0
        assert Ellipse(2, 1).r_inner == pytest.approx(math.sqrt(1 / 3))

    def test_laurent_inner_radius_below_one(self):
        assert 0 < BLOB.r_inner < 1

    def test_pairwise_injective_on_grid(self):
        r, t = np.meshgrid(np.linspace(BLOB.r_inner + 0.01, 4, 30),
                           np.linspace(0, 2 * np.pi, 60, endpoint=False))
        z = BLOB.psi((r * np.exp(1j * t)).ravel())
        d = np.abs(z[:, None] - z[None, :])
        np.fill_diagonal(d, np.inf)
        assert d.min() > 1e-6

    def test_laurent_inner_radius_contains_critical_point(self):
        # psi'(w) = 1 - 0.5 / w^2 vanishes at |w| = sqrt(0.5), so univalence stops there
        dom = Laurent(1.0, 0, [0.5])
        assert dom.r_inner >= math.sqrt(0.5)

    def test_non_univalent_tail_rejected(self):
        with pytest.raises(ValueError):
            Laurent(1.0, 0, [1.5])

    def test_from_dict(self):
        d = domain_from_dict({"kind": "laurent", "d": 1.2, "c0": [0.1, 0.05], "tail": [[0.15, 0], [0, 0.05]]})
        assert d.c0 == 0.1 + 0.05j
        assert domain_from_dict({"kind": "ellipse", "a": 2, "b": 1}).r_inner == Ellipse(2, 1).r_inner
        with pytest.raises(ValueError):
            domain_from_dict({"kind": "square"})
