import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import legendre as npleg

from jumpquad.model import GridSamples, Interval
from jumpquad.rules import (
    MAX_GAUSS_POINTS,
    Method,
    gauss_legendre_composite,
    gauss_legendre_integrate,
    gauss_legendre_rule,
    integrate_classical,
    legendre_poly_and_deriv,
    parse_method,
    simpson13_composite,
    simpson38_composite,
    trapezoid_composite,
)
from jumpquad.harness import fitted_order

UNIT = Interval(0.0, 1.0)


def grid(f, n, iv=UNIT):
    return GridSamples.from_function(f, iv, n)


# -- Newton-Cotes -----------------------------------------------------------

def test_trapezoid_linear_exact():
    assert trapezoid_composite(grid(lambda x: x, 4)) == 0.5


@pytest.mark.parametrize("n", [1, 2, 7, 64])
def test_trapezoid_constant(n):
    assert trapezoid_composite(grid(np.ones_like, n)) == pytest.approx(1.0, abs=1e-15)


def test_trapezoid_quadratic_hand_value():
    # (1/2) * (0/2 + 1/4 + 1/2)
    assert trapezoid_composite(grid(lambda x: x**2, 2)) == 0.375


def test_simpson13_cubic_exact():
    assert simpson13_composite(grid(lambda x: x**3, 2)) == pytest.approx(0.25, abs=1e-16)


def test_simpson13_constant():
    assert simpson13_composite(grid(np.ones_like, 4)) == pytest.approx(1.0, abs=1e-15)


def test_simpson13_quartic_hand_value():
    # (1/6) * (0 + 4/16 + 1)
    assert simpson13_composite(grid(lambda x: x**4, 2)) == pytest.approx(5 / 24, abs=1e-16)


def test_simpson13_odd_n_rejected():
    with pytest.raises(ValueError):
        simpson13_composite(grid(np.ones_like, 3))


def test_simpson38_cubic_exact():
    assert simpson38_composite(grid(lambda x: x**3, 3)) == pytest.approx(0.25, abs=1e-16)


def test_simpson38_constant():
    assert simpson38_composite(grid(np.ones_like, 6)) == pytest.approx(1.0, abs=1e-15)


def test_simpson38_linear_on_wider_interval():
    assert simpson38_composite(grid(lambda x: x, 3, Interval(0, 3))) == pytest.approx(4.5, abs=1e-15)


@pytest.mark.parametrize("n", [4, 5, 8])
def test_simpson38_requires_multiple_of_three(n):
    with pytest.raises(ValueError):
        simpson38_composite(grid(np.ones_like, n))


@pytest.mark.parametrize("kind, mult", [("trap", 1), ("simpson13", 2), ("simpson38", 3)])
def test_composite_rules_are_additive(kind, mult):
    # [0, 1] split at a partition node equals the sum over the halves
    f = lambda x: np.exp(np.sin(3 * x))  # noqa: E731
    n = 6 * mult
    whole = integrate_classical(f, Interval(0, 1), kind, 2 * n)
    halves = integrate_classical(f, Interval(0, 0.5), kind, n) + integrate_classical(
        f, Interval(0.5, 1), kind, n
    )
    assert whole == pytest.approx(halves, abs=1e-14)


@settings(max_examples=50, deadline=None)
@given(
    a=st.floats(-5, 5),
    widths=st.tuples(st.floats(0.1, 3), st.floats(0.1, 3)),
    cells=st.integers(1, 6),
    points=st.integers(1, 6),
)
def test_gauss_composite_is_additive(a, widths, cells, points):
    f = lambda x: np.cos(x) + x**2  # noqa: E731
    b, c = a + widths[0], a + widths[0] + widths[1]
    left = gauss_legendre_composite(f, Interval(a, b), cells, points)
    right = gauss_legendre_composite(f, Interval(b, c), cells, points)
    pieces = left + right
    # the same partition via a single call with non-uniform cells is not
    # available, so compare against the sum of per-cell single rules
    h1, h2 = (b - a) / cells, (c - b) / cells
    direct = sum(
        gauss_legendre_integrate(f, Interval(a + i * h1, a + (i + 1) * h1), points) for i in range(cells)
    ) + sum(gauss_legendre_integrate(f, Interval(b + i * h2, b + (i + 1) * h2), points) for i in range(cells))
    assert pieces == pytest.approx(direct, rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("kind, expected", [("trap", 2), ("simpson13", 4), ("simpson38", 4)])
def test_classical_orders_on_smooth_integrand(kind, expected):
    f = lambda x: np.exp(x) * np.sin(2 * x)  # noqa: E731
    # antiderivative: e^x (sin 2x - 2 cos 2x) / 5
    F = lambda x: math.exp(x) * (math.sin(2 * x) - 2 * math.cos(2 * x)) / 5  # noqa: E731
    exact = F(1.0) - F(0.0)
    m = parse_method(kind)
    ns = [m.admissible_n(6 * 2**i) for i in range(6)]
    errs = [abs(integrate_classical(f, UNIT, m, n) - exact) for n in ns]
    # the finest pre-roundoff levels
    assert fitted_order(ns[-3:], errs[-3:]) == pytest.approx(expected, abs=0.3)


# -- Legendre polynomials ---------------------------------------------------

def test_legendre_degree_zero():
    assert legendre_poly_and_deriv(0, 0.3) == (1.0, 0.0)


def test_legendre_at_one():
    assert legendre_poly_and_deriv(2, 1.0) == (1.0, 3.0)


def test_legendre_p3_at_zero():
    assert legendre_poly_and_deriv(3, 0.0) == (0.0, -1.5)


@pytest.mark.parametrize("n", [1, 2, 5, 17, 40])
def test_legendre_matches_numpy_basis(n):
    x = np.linspace(-1, 1, 33)
    basis = npleg.Legendre.basis(n)
    p, dp = legendre_poly_and_deriv(n, x)
    np.testing.assert_allclose(p, basis(x), atol=1e-12)
    np.testing.assert_allclose(dp, basis.deriv()(x), atol=1e-10 * n * n)


# -- Gauss-Legendre ---------------------------------------------------------

def test_gauss_two_points():
    r = gauss_legendre_rule(2)
    np.testing.assert_allclose(r.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)
    assert r.nodes[1] == pytest.approx(0.5773502691896257, abs=1e-16)
    np.testing.assert_allclose(r.weights, [1.0, 1.0], atol=1e-15)
    assert r.exactness_degree == 3


def test_gauss_three_points():
    r = gauss_legendre_rule(3)
    np.testing.assert_allclose(r.nodes, [-math.sqrt(0.6), 0.0, math.sqrt(0.6)], atol=1e-15)
    np.testing.assert_allclose(r.weights, [5 / 9, 8 / 9, 5 / 9], atol=1e-15)


def test_gauss_five_points_centre_weight():
    r = gauss_legendre_rule(5)
    assert r.nodes[2] == 0.0
    assert r.weights[2] == pytest.approx(128 / 225, abs=1e-15)


@pytest.mark.parametrize("n", [0, MAX_GAUSS_POINTS + 1, -3])
def test_gauss_rule_range(n):
    with pytest.raises(ValueError):
        gauss_legendre_rule(n)


@pytest.mark.parametrize("n", range(1, MAX_GAUSS_POINTS + 1))
def test_gauss_monomial_exactness_and_symmetry(n):
    r = gauss_legendre_rule(n)
    for m in range(2 * n):
        exact = 0.0 if m % 2 else 2.0 / (m + 1)
        assert abs(np.dot(r.weights, r.nodes**m) - exact) <= 5e-14, (n, m)
    np.testing.assert_allclose(r.nodes, -r.nodes[::-1], atol=1e-14)
    np.testing.assert_allclose(r.weights, r.weights[::-1], atol=1e-14)
    assert abs(r.weights.sum() - 2.0) <= 1e-14
    assert np.all(np.diff(r.nodes) > 0) and np.all(r.weights > 0)


@pytest.mark.parametrize("n", [1, 4, 12, 33, 64])
def test_gauss_matches_numpy_leggauss(n):
    x, w = npleg.leggauss(n)
    r = gauss_legendre_rule(n)
    np.testing.assert_allclose(r.nodes, x, atol=2e-15)
    np.testing.assert_allclose(r.weights, w, atol=2e-15)


def test_gauss_integrate_odd_cubic():
    assert gauss_legendre_integrate(lambda x: x**3, Interval(-1, 1), 2) == pytest.approx(0.0, abs=1e-16)


def test_gauss_integrate_constant_on_shifted_interval():
    assert gauss_legendre_integrate(np.ones_like, Interval(2, 5), 3) == pytest.approx(3.0, abs=1e-15)


def test_gauss_integrate_degree_five():
    assert gauss_legendre_integrate(lambda x: x**5, UNIT, 3) == pytest.approx(1 / 6, abs=1e-15)


def test_gauss_composite_linear():
    assert gauss_legendre_composite(lambda x: x, UNIT, 8, 2) == pytest.approx(0.5, abs=1e-15)


def test_gauss_composite_constant():
    val = gauss_legendre_composite(lambda x: 2.0 * np.ones_like(x), Interval(-2, 1), 5, 3)
    assert val == pytest.approx(6.0, abs=1e-14)


def test_gauss_composite_exp_square_against_oracle():
    # mpmath.quad(exp(x^2), [-2, 1]) at 40 digits
    oracle = 17.915279511414411834
    h = 3 / 8
    # two-point Gauss error: (b - a) h^4 max|f''''| / 4320, f'''' = (16x^4 + 48x^2 + 12) e^{x^2}
    bound = 3 * h**4 * 460 * math.exp(4) / 4320
    err = abs(gauss_legendre_composite(lambda x: np.exp(x**2), Interval(-2, 1), 8, 2) - oracle)
    assert err <= bound
    # one refinement cuts the error by roughly 2^4
    err2 = abs(gauss_legendre_composite(lambda x: np.exp(x**2), Interval(-2, 1), 16, 2) - oracle)
    assert 10 < err / err2 < 22


def test_parse_method():
    assert parse_method("gl:3") == Method("gl", 3)
    assert parse_method("trapezoid") == Method("trap")
    assert str(parse_method("simpson38")) == "simpson38"
    assert parse_method("gl:4").exactness_degree == 7
    assert parse_method("simpson38").admissible_n(16) == 18
    assert parse_method("simpson13").admissible_n(7) == 8
    assert parse_method("simpson38").admissible_n(1) == 3
    with pytest.raises(ValueError):
        parse_method("trap").admissible_n(0)
    for bad in ("midpoint", "gl:0", "gl:x", "gl:65"):
        with pytest.raises(ValueError):
            parse_method(bad)
