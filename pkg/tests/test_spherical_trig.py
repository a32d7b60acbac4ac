import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy import integrate

from sphcross.arc_predicate import crossing_batch
from sphcross.geom_core import make_rng, random_unit_points
from sphcross.spherical_trig import (DomainError, SphericalTriangleAngles, SphericalTriangleSides,
                                     angles_from_two_sides_and_included_angle, arc_length_density,
                                     arccot, cross_prob_given_length, crossing_prob_given_triangle,
                                     g, lune_area, triangle_area, vertex_angle)

from .strategies import sphere_points

PI = math.pi
inner = st.floats(1e-3, PI - 1e-3)


def dist(x, y):
    return math.atan2(np.linalg.norm(np.cross(x, y)), x @ y)


def angles_of(A, B, C):
    return vertex_angle(A, B, C), vertex_angle(B, A, C), vertex_angle(C, A, B)


def test_octant_triangle():
    assert math.isclose(g(PI / 2, PI / 2, PI / 2), PI / 2)
    assert angles_from_two_sides_and_included_angle(PI / 2, PI / 2, PI / 2) == pytest.approx((PI / 2, PI / 2))
    right = SphericalTriangleAngles(PI / 2, PI / 2, PI / 2)
    assert math.isclose(triangle_area(right), PI / 2)
    assert math.isclose(crossing_prob_given_triangle(right), 1 / 8)


def test_cotangent_relation():
    al = be = PI / 3
    c = PI / 2
    a, b = angles_from_two_sides_and_included_angle(al, be, c)
    lhs = math.sin(al) / math.tan(be)
    rhs = math.cos(al) * math.cos(c) + math.sin(c) / math.tan(b)
    assert abs(lhs - rhs) < 1e-12
    assert abs(math.sin(be) / math.tan(al) - math.cos(be) * math.cos(c) - math.sin(c) / math.tan(a)) < 1e-12


@pytest.mark.parametrize("y, z", [(0.7, 1.1), (2.0, 0.4), (PI / 2, 2.9)])
def test_g_continuous_at_right_side(y, z):
    assert abs(g(PI / 2 + 1e-9, y, z) - g(PI / 2 - 1e-9, y, z)) < 1e-6


def test_arccot_range():
    t = np.linspace(-1e6, 1e6, 101)
    r = arccot(t)
    assert np.all((r > 0) & (r < PI))
    assert math.isclose(arccot(0.0), PI / 2)


def test_domain_errors():
    for bad in ((0.0, 1.0, 1.0), (1.0, PI, 1.0), (1.0, 1.0, -0.2), (math.nan, 1, 1)):
        with pytest.raises(DomainError):
            g(*bad)
    with pytest.raises(DomainError):
        SphericalTriangleAngles(0.5, 0.5, 0.5)
    with pytest.raises(DomainError):
        SphericalTriangleSides(1.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        lune_area(4.0)


@given(inner, inner)
def test_isosceles_gives_equal_angles(al, c):
    a, b = angles_from_two_sides_and_included_angle(al, al, c)
    assert math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12)


@given(inner, inner, inner)
def test_g_is_a_positive_angle(x, y, z):
    assert 0 < g(x, y, z) < PI


@given(sphere_points(), sphere_points(), sphere_points())
def test_round_trip_against_measured_angles(A, B, C):
    al, be = dist(B, C), dist(A, C)
    c = vertex_angle(C, A, B)
    lo = 1e-2
    assume(min(al, be, c) > lo and max(al, be, c) < PI - lo)
    assume(abs(np.linalg.det(np.array([A, B, C]))) > 1e-3)
    a, b = angles_from_two_sides_and_included_angle(al, be, c)
    assert abs(a - vertex_angle(A, B, C)) < 1e-9
    assert abs(b - vertex_angle(B, A, C)) < 1e-9


@given(sphere_points(), sphere_points(), sphere_points())
def test_lune_and_hemisphere_decomposition(A, B, C):
    assume(abs(np.linalg.det(np.array([A, B, C]))) > 1e-3)
    a, b, c = angles_of(A, B, C)
    T = a + b + c - PI
    # triangle with A replaced by its antipode fills out the lune at A
    adj_a = sum(angles_of(-A, B, C)) - PI
    assert abs(T + adj_a - lune_area(a)) < 1e-12
    adj_b = sum(angles_of(A, -B, C)) - PI
    adj_c = sum(angles_of(A, B, -C)) - PI
    assert abs(T + adj_a + adj_b + adj_c - 2 * PI) < 1e-11


def test_lune_boundary():
    assert math.isclose(lune_area(PI), 2 * PI)
    assert lune_area(0.0) == 0.0


def test_degenerate_triangle_limit():
    # a -> pi with b, c -> 0: the complementary triangle approaches a hemisphere
    assert math.isclose(crossing_prob_given_triangle(SphericalTriangleAngles(PI - 2e-9, 1e-9, 1e-9 + 1e-12)),
                        0.5, abs_tol=1e-8)


def test_crossing_probability_by_simulation():
    rng = make_rng(2024)
    A, B, C = random_unit_points(rng, 3)
    a, b, c = angles_of(A, B, C)
    p = crossing_prob_given_triangle(SphericalTriangleAngles(a, b, c))
    n = 100_000
    P = random_unit_points(rng, n)
    hits = crossing_batch(np.broadcast_to(A, P.shape), P, np.broadcast_to(B, P.shape),
                          np.broadcast_to(C, P.shape)).mean()
    assert abs(hits - p) < 3 * math.sqrt(p * (1 - p) / n)


def test_arc_length_density_integrals():
    total, _ = integrate.quad(arc_length_density, 0, PI, epsabs=1e-14)
    assert abs(total - 1) < 1e-12
    delta, _ = integrate.quad(lambda x: cross_prob_given_length(x) * arc_length_density(x), 0, PI,
                              epsabs=1e-14)
    assert abs(delta - 1 / 8) < 1e-12
    assert cross_prob_given_length(PI) == 0.25
