"""Named test integrands.

``exp1``  cos(pi x) + 10 | sin(pi x) on [0, 1], break at pi/9 (jump in f).
``exp2``  cos(pi (x - pi/9)) | 1 + sin(pi (x - pi/9)) on [0, 1] (jump in f').
``exp4``  exp(x^2) | sin(x) on [-2, 1], break at 0.1.
``poly2`` .. ``poly5``  the two-piece polynomials of degree 2m-1 used with
m-point Gauss-Legendre, on [-1, 1] with the break at 0 by default.
``step``  0 | 1 on [0, 1], break at 0.4.
``sine``  sin(pi x) on [0, 1] with identical branches (no discontinuity).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import Polynomial

from .model import ConfigurationError, Interval, PiecewiseFunction

# orders of analytic derivative evaluators generated for transcendental pieces
_MAX_DERIV = 16


@dataclass(frozen=True)
class TestProblem:
    name: str
    func: PiecewiseFunction
    interval: Interval
    # antiderivatives of each branch, when known in closed form
    left_antideriv: Optional[Callable[[float], float]] = None
    right_antideriv: Optional[Callable[[float], float]] = None
    description: str = ""

    __test__ = False  # not a pytest class


def _trig_derivs(fn, scale, shift, k_max=_MAX_DERIV):
    """Derivatives of ``fn(scale*(x - shift))`` for fn in {sin, cos}."""
    phase = {np.sin: 0.0, np.cos: 0.5 * math.pi}[fn]
    return tuple(
        (lambda x, k=k: scale**k * np.sin(scale * (np.asarray(x) - shift) + phase + k * 0.5 * math.pi))
        for k in range(1, k_max + 1)
    )


def _exp_square_derivs(k_max=_MAX_DERIV):
    # d^k/dx^k exp(x^2) = q_k(x) exp(x^2) with q_{k+1} = q_k' + 2x q_k
    q = Polynomial([1.0])
    two_x = Polynomial([0.0, 2.0])
    out = []
    for _ in range(k_max):
        q = q.deriv() + two_x * q
        out.append(lambda x, q=q: q(np.asarray(x)) * np.exp(np.asarray(x) ** 2))
    return tuple(out)


def _exp1() -> TestProblem:
    xs = math.pi / 9
    f = PiecewiseFunction(
        left_eval=lambda x: np.cos(math.pi * np.asarray(x)) + 10.0,
        right_eval=lambda x: np.sin(math.pi * np.asarray(x)),
        breakpoint=xs,
        left_derivs=_trig_derivs(np.cos, math.pi, 0.0),
        right_derivs=_trig_derivs(np.sin, math.pi, 0.0),
    )
    return TestProblem(
        "exp1",
        f,
        Interval(0.0, 1.0),
        left_antideriv=lambda x: math.sin(math.pi * x) / math.pi + 10.0 * x,
        right_antideriv=lambda x: -math.cos(math.pi * x) / math.pi,
        description="cos(pi x)+10 | sin(pi x), break at pi/9",
    )


def _exp2() -> TestProblem:
    xs = math.pi / 9
    f = PiecewiseFunction(
        left_eval=lambda x: np.cos(math.pi * (np.asarray(x) - xs)),
        right_eval=lambda x: 1.0 + np.sin(math.pi * (np.asarray(x) - xs)),
        breakpoint=xs,
        left_derivs=_trig_derivs(np.cos, math.pi, xs),
        right_derivs=_trig_derivs(np.sin, math.pi, xs),
    )
    return TestProblem(
        "exp2",
        f,
        Interval(0.0, 1.0),
        left_antideriv=lambda x: math.sin(math.pi * (x - xs)) / math.pi,
        right_antideriv=lambda x: x - math.cos(math.pi * (x - xs)) / math.pi,
        description="cos(pi(x-pi/9)) | 1+sin(pi(x-pi/9)), break at pi/9",
    )


def _exp4() -> TestProblem:
    f = PiecewiseFunction(
        left_eval=lambda x: np.exp(np.asarray(x) ** 2),
        right_eval=lambda x: np.sin(np.asarray(x)),
        breakpoint=0.1,
        left_derivs=_exp_square_derivs(),
        right_derivs=_trig_derivs(np.sin, 1.0, 0.0),
    )
    return TestProblem(
        "exp4",
        f,
        Interval(-2.0, 1.0),
        left_antideriv=None,  # no elementary antiderivative; the oracle adapts
        right_antideriv=lambda x: -math.cos(x),
        description="exp(x^2) | sin(x), break at 0.1",
    )


# constant-first coefficients of the left/right pieces for m-point rules
POLYNOMIAL_PIECES = {
    2: ([1, -3, 2, 1], [-2, 1, -2, 2]),
    3: ([1, 1, -1, 1, -3, 1], [3, -2, -1, 2, -1, 2]),
    4: ([1, 1, -1, 1, -3, 1, 1, -1], [3, -2, -1, 2, -1, 2, -1, 2]),
    5: ([1, 1, -1, 1, -3, 1, 1, -1, -2, 1], [3, -2, -1, 2, -1, 2, -1, 2, -1, 3]),
}


@lru_cache(maxsize=None)
def _polynomial_base(points: int) -> TestProblem:
    left, right = (Polynomial(c) for c in POLYNOMIAL_PIECES[points])
    return TestProblem(
        f"poly{points}",
        PiecewiseFunction.from_polynomials(left, right, 0.0),
        Interval(-1.0, 1.0),
        left_antideriv=lambda x, p=left.integ(): float(p(x)),
        right_antideriv=lambda x, p=right.integ(): float(p(x)),
    )


def polynomial_problem(points: int, breakpoint: float = 0.0) -> TestProblem:
    """Two-piece polynomial of degree ``2*points - 1`` on [-1, 1]."""
    if points not in POLYNOMIAL_PIECES:
        raise ConfigurationError(f"no piecewise polynomial for {points} points (have 2..5)")
    base = _polynomial_base(points)
    return replace(
        base,
        func=replace(base.func, breakpoint=breakpoint),
        description=f"degree-{2 * points - 1} piecewise polynomial, break at {breakpoint}",
    )


def _step() -> TestProblem:
    f = PiecewiseFunction(
        left_eval=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        right_eval=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        breakpoint=0.4,
        left_derivs=tuple(lambda x: np.zeros_like(np.asarray(x, dtype=float)) for _ in range(_MAX_DERIV)),
        right_derivs=tuple(lambda x: np.zeros_like(np.asarray(x, dtype=float)) for _ in range(_MAX_DERIV)),
    )
    return TestProblem(
        "step", f, Interval(0.0, 1.0), lambda x: 0.0, lambda x: x, "0 | 1, break at 0.4"
    )


def _sine() -> TestProblem:
    ev = lambda x: np.sin(math.pi * np.asarray(x))  # noqa: E731
    d = _trig_derivs(np.sin, math.pi, 0.0)
    f = PiecewiseFunction(ev, ev, 0.5, d, d)
    anti = lambda x: -math.cos(math.pi * x) / math.pi  # noqa: E731
    return TestProblem("sine", f, Interval(0.0, 1.0), anti, anti, "sin(pi x), smooth")


_FACTORIES = {
    "exp1": _exp1,
    "exp2": _exp2,
    "exp4": _exp4,
    "step": _step,
    "sine": _sine,
    **{f"poly{m}": (lambda m=m: polynomial_problem(m)) for m in POLYNOMIAL_PIECES},
}

BUILTIN_NAMES = tuple(_FACTORIES)


def get_problem(name: str) -> TestProblem:
    try:
        return _FACTORIES[name]()
    except KeyError:
        raise ConfigurationError(
            f"unknown function {name!r}; known: {', '.join(BUILTIN_NAMES)}"
        ) from None
