"""Independent oracles shared by the test modules."""

import mpmath
import numpy as np
from numpy.polynomial import Polynomial

from jumpquad.correction import corrected_integrate_analytic
from jumpquad.functions import POLYNOMIAL_PIECES
from jumpquad.model import Interval, PiecewiseFunction, jumps_from_analytic
from jumpquad.rules import parse_method

mpmath.mp.dps = 40

EXACTNESS_RULES = [("trap", 3), ("simpson13", 4), ("simpson38", 3), ("gl:1", 2), ("gl:2", 1),
                   ("gl:3", 1), ("gl:4", 1), ("gl:5", 2)]


def mp_breakpoint(name, fallback):
    return mpmath.pi / 9 if name in ("exp1", "exp2") else mpmath.mpf(fallback)


def mp_branch(name, side):
    """Branch of a built-in integrand written with mpmath functions."""
    if name.startswith("poly"):
        pieces = [float(c) for c in POLYNOMIAL_PIECES[int(name[4:])][side == "right"]]
        return lambda t: mpmath.polyval(pieces[::-1], t)
    pi, xs = mpmath.pi, mpmath.pi / 9
    table = {
        ("exp1", "left"): lambda t: mpmath.cos(pi * t) + 10,
        ("exp1", "right"): lambda t: mpmath.sin(pi * t),
        ("exp2", "left"): lambda t: mpmath.cos(pi * (t - xs)),
        ("exp2", "right"): lambda t: 1 + mpmath.sin(pi * (t - xs)),
        ("exp4", "left"): lambda t: mpmath.exp(t * t),
        ("exp4", "right"): mpmath.sin,
        ("step", "left"): lambda t: mpmath.mpf(0),
        ("step", "right"): lambda t: mpmath.mpf(1),
        ("sine", "left"): lambda t: mpmath.sin(pi * t),
        ("sine", "right"): lambda t: mpmath.sin(pi * t),
    }
    return table[(name, side)]


def exactness_worst(method, n, coeff_sets=100, positions=100, seed=0):
    """Largest relative error of the corrected rule on random piecewise polynomials.

    Piece degrees equal the rule's exactness degree; the reference is the
    power-rule antiderivative. Errors are relative to ``max(1, |I|)``.
    """
    m = parse_method(method)
    deg = m.exactness_degree
    rng = np.random.default_rng([seed, deg, m.points or 0, n])
    iv = Interval(-1.0, 1.0)
    worst = 0.0
    for _ in range(coeff_sets):
        left = Polynomial(rng.uniform(-5, 5, deg + 1))
        right = Polynomial(rng.uniform(-5, 5, deg + 1))
        base = PiecewiseFunction.from_polynomials(left, right, 0.0)
        li, ri = left.integ(), right.integ()
        for xs in rng.uniform(-1 + 1e-6, 1 - 1e-6, positions):
            f = PiecewiseFunction(base.left_eval, base.right_eval, float(xs), base.left_derivs, base.right_derivs)
            exact = (li(xs) - li(-1.0)) + (ri(1.0) - ri(xs))
            val = corrected_integrate_analytic(f, jumps_from_analytic(f, deg), iv, m, n)
            worst = max(worst, abs(val - exact) / max(1.0, abs(exact)))
    return worst
