import math
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphcross.layout_constants import moon_hypothesis_constants, rla_constants
from sphcross.product_types import GraphSpec, UnsupportedGraph, census_bruteforce, census_closed_form
from sphcross.variance_engine import (MOON1977_BIPARTITE, MOON1977_COMPLETE, MissingConstant,
                                      deviation_bipartite, deviation_complete, deviation_sign_map,
                                      expectation, moments, moon1977_bipartite_check,
                                      moon1977_leading_coefficient_check, moon_variance_bipartite,
                                      moon_variance_complete, rla_reference, variance_bipartite_rsa,
                                      variance_bipartite_rounded, variance_complete_rounded,
                                      variance_complete_rsa, variance_general)

PI = math.pi


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def test_k4(rsa):
    assert variance_complete_rsa(4, rsa) == pytest.approx(15 / 64, abs=1e-15)
    assert variance_general(census_closed_form(GraphSpec.complete(4)), rsa) == pytest.approx(15 / 64)
    assert moon_variance_complete(4) == pytest.approx(15 / 64)
    assert expectation(GraphSpec.complete(4), rsa) == 3 / 8


def test_single_independent_pair_is_bernoulli(rsa):
    g = GraphSpec.edge_list([(0, 1), (2, 3)])
    assert moments(g, rsa, "general_sum").variance == pytest.approx(7 / 64)
    assert moments(g, rsa, "general_sum").expectation == 1 / 8


def test_star_has_no_crossings(rsa):
    g = GraphSpec.edge_list([(0, i) for i in range(1, 6)])
    r = moments(g, rsa, "general_sum")
    assert r.expectation == 0 and r.variance == 0


@pytest.mark.parametrize("n", range(4, 13))
def test_complete_structural_identity(rsa, n):
    g = GraphSpec.complete(n)
    closed = variance_complete_rsa(n, rsa)
    assert rel(variance_general(census_closed_form(g), rsa), closed) < 1e-9
    assert rel(variance_general(census_bruteforce(g), rsa), closed) < 1e-9


@pytest.mark.parametrize("n1, n2", [(a, b) for a in range(2, 9) for b in range(2, 9)])
def test_bipartite_structural_identity(rsa, n1, n2):
    g = GraphSpec.complete_bipartite(n1, n2)
    closed = variance_bipartite_rsa(n1, n2, rsa)
    assert rel(variance_general(census_closed_form(g), rsa), closed) < 1e-9
    if n1 * n2 <= 25:
        assert rel(variance_general(census_bruteforce(g), rsa), closed) < 1e-9


def test_bipartite_expectation(rsa):
    for a, b in [(2, 2), (3, 7), (9, 4)]:
        assert expectation(GraphSpec.complete_bipartite(a, b), rsa) == pytest.approx(comb(a, 2) * comb(b, 2) / 4)


def test_rounded_complete_form(rsa):
    assert rel(variance_complete_rsa(10, rsa), variance_complete_rounded(10)) < 5e-3


def test_rounded_bipartite_form(rsa):
    # the published rounding of 0.125 to 0.12 alone leaves a ~2% gap
    for a, b in [(5, 5), (6, 9), (8, 8)]:
        assert rel(variance_bipartite_rsa(a, b, rsa), variance_bipartite_rounded(a, b)) < 3e-2


@pytest.mark.parametrize("n", range(4, 51))
def test_moon_reconstruction_complete(n):
    k = moon_hypothesis_constants()
    assert rel(variance_complete_rsa(n, k), moon_variance_complete(n)) < 1e-12


@given(st.integers(2, 40), st.integers(2, 40))
def test_moon_reconstruction_bipartite(n1, n2):
    k = moon_hypothesis_constants()
    assert rel(variance_bipartite_rsa(n1, n2, k), moon_variance_bipartite(n1, n2)) < 1e-12


def test_moon_bipartite_small():
    assert moon_variance_bipartite(2, 2) == pytest.approx(3 / 16)


def test_moon_underestimates_small_graphs(rsa):
    assert deviation_complete(10, rsa) > 0
    assert moon_variance_complete(10) < variance_complete_rsa(10, rsa)
    assert moon_variance_bipartite(10, 10) < variance_bipartite_rsa(10, 10, rsa)


def test_published_constants_put_root_near_122_5(published):
    assert deviation_complete(122, published) > 0 > deviation_complete(123, published)
    # deviation / (3 C(n,4) (n-4)) is linear in n; its zero is the crossover point
    h = {n: deviation_complete(n, published) / (3 * comb(n, 4) * (n - 4)) for n in (10, 200)}
    root = 10 - h[10] * (200 - 10) / (h[200] - h[10])
    assert root == pytest.approx(122.48, abs=0.01)


def test_deviation_growth_is_bounded_by_n6(rsa):
    ratios = [abs(deviation_complete(n, rsa)) / n**6 for n in (10**3, 10**4)]
    assert ratios[1] < 1e-4 and ratios[1] <= 10 * ratios[0]


def test_sign_map_shape_and_values(rsa):
    grid = deviation_sign_map(range(2, 6), range(2, 9), rsa)
    assert grid.shape == (4, 7)
    assert set(grid.ravel()) <= {-1, 1}
    assert grid[0, 0] == 1  # K_{2,2}: both formulas equal, zero counts as +1
    assert deviation_bipartite(2, 2, rsa) == pytest.approx(0.0, abs=1e-12)


def test_moon1977_targets():
    assert MOON1977_COMPLETE == pytest.approx(3.6998e-4, rel=1e-4)
    assert MOON1977_BIPARTITE == 4 * MOON1977_COMPLETE


def test_moon1977_checks(rsa):
    r, t = moon1977_leading_coefficient_check(10**4, rsa)
    assert rel(r, t) < 0.01
    r, t = moon1977_bipartite_check(10**3, rsa)
    assert rel(r, t) < 0.02


def test_rla_reference():
    assert rla_reference(GraphSpec.complete(9)).variance == 0
    r = rla_reference(GraphSpec.complete_bipartite(2, 2))
    assert r.variance == pytest.approx(2 / 9) and r.expectation == pytest.approx(2 / 3)
    with pytest.raises(UnsupportedGraph):
        rla_reference(GraphSpec.edge_list([(0, 1), (2, 3)]))


def test_missing_rla_gammas():
    with pytest.raises(MissingConstant):
        variance_general(census_closed_form(GraphSpec.complete(5)), rla_constants())


def test_methods_agree(rsa):
    g = GraphSpec.complete_bipartite(4, 5)
    a = moments(g, rsa, "closed_form")
    b = moments(g, rsa, "general_sum")
    assert rel(a.variance, b.variance) < 1e-12
    assert a.constants_used == rsa.provenance_summary()
    assert moments(g, rsa, "moon_1965").variance == pytest.approx(moon_variance_bipartite(4, 5))
    assert moments(g, rsa, "rla_reference").method == "rla_reference"
    with pytest.raises(ValueError):
        moments(g, rsa, "bogus")
    with pytest.raises(UnsupportedGraph):
        moments(GraphSpec.edge_list([(0, 1), (2, 3)]), rsa, "closed_form")
