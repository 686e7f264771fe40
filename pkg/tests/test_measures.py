import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from isodensity.exceptions import DivergenceError, PreconditionError
from isodensity.geometry import Disk, FourierStar, Polygon, Union
from isodensity.measures import (
    WeightParams,
    deficit,
    integrate_boundary,
    jensen_chain,
    segment_minimality,
    weighted_perimeter,
    weighted_volume,
)


def disk_perimeter_oracle(c: complex, R: float, p: float) -> float:
    """Adaptive QUADPACK along the circle, with the closest point as a breakpoint."""
    t_near = math.atan2(-c.imag, -c.real) % (2 * math.pi) if c else 0.0

    def f(t):
        return abs(c + R * complex(math.cos(t), math.sin(t))) ** p * R

    val, _ = quad(f, t_near, t_near + 2 * math.pi, epsabs=1e-13, epsrel=1e-13, limit=500)
    return val


class TestWeightedPerimeter:
    @pytest.mark.parametrize("R", [0.5, 1.0, 3.0])
    @pytest.mark.parametrize("p", [-1.0, -0.5, 0.0, 1.0, 2.5])
    def test_centered_disk_closed_form(self, R, p):
        assert weighted_perimeter(Disk(0j, R), p) == pytest.approx(2 * math.pi * R ** (p + 1), rel=1e-13)

    @pytest.mark.parametrize("c", [0.3, 0.5j, -0.7 + 0.2j, 2.0, 1.5 - 1.5j])
    @pytest.mark.parametrize("p", [-0.9, -0.5, 0.5, 2.0])
    def test_offset_disk_against_quad(self, c, p):
        assert weighted_perimeter(Disk(c, 1.0), p) == pytest.approx(
            disk_perimeter_oracle(c, 1.0, p), rel=1e-10)

    @pytest.mark.parametrize("p", [-0.9, -0.5, 0.5])
    @pytest.mark.parametrize("angle", [0.0, 0.7, 2.0])
    def test_origin_on_boundary_against_quad(self, p, angle):
        c = complex(math.cos(angle), math.sin(angle))
        # closed form 2^(p+1) sqrt(pi) Gamma((p+1)/2)/Gamma(p/2+1) for a unit circle through 0
        exact = 2 ** (p + 1) * math.sqrt(math.pi) * math.gamma((p + 1) / 2) / math.gamma(p / 2 + 1)
        assert weighted_perimeter(Disk(c, 1.0), p) == pytest.approx(exact, rel=1e-9)

    def test_diverges_with_origin_on_boundary(self):
        with pytest.raises(DivergenceError):
            weighted_perimeter(Disk(1, 1.0), -1.0)

    def test_polygon_vertex_at_origin(self):
        sq = Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
        p = -0.5
        # two edges through the origin in closed form, two far edges by quad
        near = 2 / (p + 1)
        far = 2 * quad(lambda s: math.hypot(1, s) ** p, 0, 1, epsabs=1e-14)[0]
        assert weighted_perimeter(sq, p) == pytest.approx(near + far, rel=1e-10)

    def test_union_is_additive(self):
        a, b = Disk(0j, 1), Disk(4 + 1j, 0.5)
        u = Union([a, b])
        assert weighted_perimeter(u, 0.7) == pytest.approx(
            weighted_perimeter(a, 0.7) + weighted_perimeter(b, 0.7), rel=1e-14)

    @given(st.floats(0.2, 5.0), st.floats(-0.9, 2.0), st.floats(0, 2 * math.pi))
    def test_homogeneity_and_rotation(self, lam, p, ang):
        d = FourierStar(0j, 1.0, [0.1, 0.15], [-0.05])
        base = weighted_perimeter(d, p)
        assert weighted_perimeter(d.scaled(lam), p) == pytest.approx(lam ** (p + 1) * base, rel=1e-10)
        assert weighted_perimeter(d.rotated(ang), p) == pytest.approx(base, rel=1e-10)

    def test_integrate_boundary_constant(self):
        assert integrate_boundary(Disk(0j, 2), lambda z, n: np.ones(z.shape)) == pytest.approx(4 * math.pi)


class TestWeightedVolume:
    @pytest.mark.parametrize("q", [-1.5, -1.0, 0.0, 1.0, 3.0])
    def test_centered_disk(self, q):
        assert weighted_volume(Disk(0j, 2), q) == pytest.approx(2 * math.pi * 2 ** (q + 2) / (q + 2))

    @pytest.mark.parametrize("q", [-1.5, -0.5, 0.0, 2.0])
    def test_offset_disk_against_dblquad(self, q):
        d = Disk((0.4, 0.0), 1.0)
        rho = lambda t: 0.4 * math.cos(t) + math.sqrt(1 - (0.4 * math.sin(t)) ** 2)
        ref = quad(lambda t: rho(t) ** (q + 2) / (q + 2), 0, 2 * math.pi, epsabs=1e-13)[0]
        assert weighted_volume(d, q) == pytest.approx(ref, rel=1e-10)

    def test_q_zero_is_area(self):
        sq = Polygon([(1, 1), (3, 1), (3, 2), (1, 2)])
        assert weighted_volume(sq, 0.0) == pytest.approx(2.0, rel=1e-12)

    def test_divergent_exponent(self):
        with pytest.raises(DivergenceError):
            weighted_volume(Disk(0j, 1), -2.0)

    def test_weight_params_validation(self):
        with pytest.raises(PreconditionError):
            WeightParams(p=-1.5)
        with pytest.raises(DivergenceError):
            WeightParams(q=-2)
        with pytest.raises(PreconditionError):
            WeightParams(beta=2.5)


class TestDeficit:
    @pytest.mark.parametrize("p", [-1.0, -0.5, 0.0, 1.0, 2.5])
    def test_centered_disk_equality(self, p):
        rep = deficit(Disk(0j, 3.0), p)
        assert abs(rep.deficit) < 1e-9
        assert rep.verdict == "holds"

    def test_classical_case_translation_invariant(self):
        assert abs(deficit(Disk((5, 2), 1.0), 0.0).deficit) < 1e-12

    def test_verdict_outside_hypotheses(self):
        rep = deficit(Disk(3, 1), -0.5)
        assert rep.verdict == "out_of_hypothesis"
        assert rep.deficit < 0

    def test_report_layout(self):
        d = deficit(Disk(0j, 1), 1.0).to_dict()
        assert list(d) == ["lhs", "rhs", "deficit", "p", "hypothesis", "verdict", "quad_order"]
        assert d["hypothesis"] == {"connected": True, "origin": "inside"}

    def test_rejects_p_below_minus_one(self):
        with pytest.raises(PreconditionError):
            deficit(Disk(0j, 1), -1.5)

    @given(st.floats(0.0, 0.95), st.floats(0, 2 * math.pi), st.sampled_from([-0.5, 0.5, 1.0, 2.0]))
    def test_translated_disk_nonnegative(self, r, ang, p):
        c = r * complex(math.cos(ang), math.sin(ang))
        assert deficit(Disk(c, 1.0), p).deficit >= -1e-9


class TestJensenChain:
    @pytest.mark.parametrize("p", [1.0, 2.0, 3.5])
    def test_ordering(self, p):
        t1, t2, t3 = jensen_chain(FourierStar(0j, 1.0, [0.2, 0.1], [0.0, 0.05]), p)
        assert t1 <= t2 + 1e-12 <= t3 + 2e-12

    def test_disk_equality(self):
        t = jensen_chain(Disk(0j, 2.0), 1.0)
        assert t == pytest.approx((8 * math.pi,) * 3)

    def test_needs_p_at_least_one(self):
        with pytest.raises(PreconditionError):
            jensen_chain(Disk(0j, 1), 0.5)


class TestSegmentMinimality:
    @pytest.mark.parametrize("p, segment", [(0.0, 2.0), (1.0, 1.0)])
    def test_half_circle_longer_than_diameter(self, p, segment):
        t = np.linspace(0, math.pi, 200)
        curve = np.column_stack([np.cos(t), np.sin(t)])
        val, seg = segment_minimality((1, 0), (-1, 0), curve, p)
        assert val == pytest.approx(math.pi, rel=1e-7)
        assert seg == pytest.approx(segment, rel=1e-14)
        assert seg <= val

    def test_origin_off_line(self):
        with pytest.raises(PreconditionError):
            segment_minimality((1, 1), (2, 1), np.zeros((64, 2)), 1.0)
