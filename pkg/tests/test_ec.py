from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from colorclass.ec import (DensityError, DensityQuery, dependency_relations, density_polynomial,
                           evaluate_polynomial, exact_expectation, expected_density,
                           monte_carlo_density, stirling2, stirling2_alternating)
from colorclass.lattice import build

fractions = st.fractions(min_value=0, max_value=1, max_denominator=50)


def test_stirling_small_values():
    assert [stirling2(4, r) for r in range(1, 5)] == [1, 7, 6, 1]
    assert stirling2(5, 3) == stirling2_alternating(5, 3) == 25
    with pytest.raises(DensityError):
        stirling2(13, 2)


@given(fractions)
def test_one_color_densities(p):
    q = 1 - p
    assert expected_density(1, (p, q), 1).value == p - p ** 2
    assert expected_density(2, (p, q), 1).value == p - 3 * p ** 2 + 2 * p ** 3
    assert expected_density(3, (p, q), 1).value == p - 7 * p ** 2 + 12 * p ** 3 - 6 * p ** 4


@given(fractions, st.integers(1, 5))
def test_one_color_symmetry(p, d):
    a = expected_density(d, (p, 1 - p), 1).value
    b = expected_density(d, (1 - p, p), 1).value
    assert a == (-1) ** (d + 1) * b
    assert a == expected_density(d, (1 - p, p), 2).value


def test_two_color_density_vanishes_on_ellipse():
    p, q = sympy.symbols("p q")
    poly = density_polynomial(3, 3, 0b011)
    expr = sum(c * p ** e[0] * q ** e[1] for e, c in poly.items())
    ellipse = 21 * (p - q) ** 2 + 3 * (7 * p + 7 * q - 6) ** 2 - 10
    assert sympy.expand(expr) == sympy.expand(
        14 * p * q - 36 * p ** 2 * q - 36 * p * q ** 2 + 24 * p * q ** 3 + 36 * p ** 2 * q ** 2
        + 24 * p ** 3 * q)
    assert sympy.expand(expr - p * q * ellipse / 7) == 0


def test_all_color_surface_density():
    third = Fraction(1, 3)
    assert expected_density(4, (third, third, third), 7).value == 60 * third ** 3 * (6 * third ** 2 - 1)
    assert expected_density(4, (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)), 7).value == \
        60 * Fraction(1, 32) * (2 * (Fraction(1, 4) + Fraction(1, 16) * 2) - 1)


def test_cli_example_value():
    assert expected_density(3, (0.5, 0.5), 1).value == -0.125
    assert expected_density(DensityQuery(3, (Fraction(1, 2), Fraction(1, 2)), 1)).value == Fraction(-1, 8)


def test_terms_sum_to_value():
    r = expected_density(4, (Fraction(1, 5), Fraction(3, 10), Fraction(1, 2)), 0b101)
    assert sum(r.terms.values()) == r.value


@given(st.integers(1, 6), st.integers(2, 3), st.lists(st.integers(1, 20), min_size=3, max_size=3))
def test_dependency_relations_vanish(d, k, w):
    w = w[:k]
    probs = [Fraction(x, sum(w)) for x in w]
    assert all(r == 0 for r in dependency_relations(d, k, probs))


@given(st.integers(1, 5), st.integers(1, 7), st.lists(st.integers(1, 20), min_size=3, max_size=3))
def test_polynomial_matches_direct_sum(d, C, w):
    probs = [Fraction(x, sum(w)) for x in w]
    if bin(C).count("1") > d + 1:
        return
    assert evaluate_polynomial(density_polynomial(d, 3, C), probs) == expected_density(d, probs, C).value


def test_exact_enumeration_matches_theory():
    half = Fraction(1, 2)
    assert exact_expectation(build("torus", 2, 2), (half, half), 1) == 0
    p = Fraction(1, 3)
    assert exact_expectation(build("torus", 1, 3), (p, 1 - p), 1) == p - p ** 2


def test_monte_carlo_agrees_with_theory():
    mean, se = monte_carlo_density(build("torus", 2, 6), (0.3, 0.7), 1, 2000, seed=11)
    theory = float(expected_density(2, (0.3, 0.7), 1).value)
    assert abs(mean - theory) < 4 * se


def test_invalid_queries():
    with pytest.raises(DensityError):
        expected_density(3, (0.5, 0.6), 1)
    with pytest.raises(DensityError):
        expected_density(3, (0.5, 0.5), 4)
    with pytest.raises(DensityError):
        exact_expectation(build("torus", 3, 4), (0.5, 0.5), 1)
