"""Jump-corrected quadrature.

Given the breakpoint ``x*`` and the jumps ``[f^(k)]``, ``k = 0..l``, the
Taylor jump polynomial

    T(x) = sum_k [f^(k)] / k! * (x - x*)^k

is subtracted from the integrand on ``[x*, b]``. The result is ``C^l``
across the breakpoint, so a classical rule keeps its smooth-case order on
it. The integral of ``T`` over ``[x*, b]`` is added back in closed form.

Note on the tail: integrating ``T`` term by term gives
``sum_k [f^(k)] / (k+1)! * (b - x*)^(k+1)``. A variant with the derivative
index shifted by one (``[f^(i)] / i! * (b - x*)^i``, ``i = 1..l+1``) is
sometimes quoted; it is not the integral of ``T`` and is not used here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .model import GridSamples, Interval, JumpData, PiecewiseFunction, eval_piecewise
from .rules import (
    apply_grid_rule,
    gauss_legendre_composite,
    parse_method,
)


def _taylor_coefficients(j: JumpData) -> np.ndarray:
    return np.array([v / math.factorial(k) for k, v in enumerate(j.jumps)])


def jump_taylor_eval(j: JumpData, x):
    """Evaluate the jump Taylor polynomial at ``x`` (scalar or array) by Horner."""
    c = _taylor_coefficients(j)
    t = np.asarray(x, dtype=float) - j.breakpoint
    acc = np.full_like(t, c[-1])
    for ck in c[-2::-1]:
        acc = acc * t + ck
    return float(acc) if np.ndim(x) == 0 else acc


def correction_tail_integral(j: JumpData, b: float) -> float:
    """Exact integral of the jump Taylor polynomial over ``[x*, b]``."""
    t = float(b) - j.breakpoint
    if t < 0:
        raise ValueError(f"upper limit {b} lies left of the breakpoint {j.breakpoint}")
    c = _taylor_coefficients(j)
    acc = 0.0
    for k in range(len(c) - 1, -1, -1):
        acc = acc * t + c[k] / (k + 1)
    return acc * t


@dataclass(frozen=True)
class CorrectionContext:
    """Jump data bound to an interval, with the tail integral cached."""

    jumps: JumpData
    interval: Interval
    tail: float = field(init=False)

    def __post_init__(self):
        if not self.interval.contains_strictly(self.jumps.breakpoint):
            raise ValueError(
                f"breakpoint {self.jumps.breakpoint} not strictly inside "
                f"[{self.interval.a}, {self.interval.b}]"
            )
        object.__setattr__(self, "tail", correction_tail_integral(self.jumps, self.interval.b))


def build_regularized(f: PiecewiseFunction, j: JumpData):
    """Return the callable ``x -> f(x) - T(x) * [x >= j.breakpoint]``.

    When ``j.breakpoint`` equals ``f.breakpoint`` this is ``f-`` on the left
    and ``f+ - T`` on the right. With a shifted breakpoint estimate the
    original function is still what gets sampled, as it would be in practice.
    """
    xs = j.breakpoint

    def regularized(x):
        values = eval_piecewise(f, x)
        if np.ndim(x) == 0:
            return values - jump_taylor_eval(j, x) if float(x) >= xs else values
        x = np.asarray(x, dtype=float)
        right = x >= xs
        if not right.any():
            return values
        out = np.array(values, dtype=float, copy=True)
        out[right] -= jump_taylor_eval(j, x[right])
        return out

    return regularized


def default_order(method) -> int:
    """Jump order that keeps the rule's polynomial exactness."""
    return parse_method(method).exactness_degree


def corrected_integrate_analytic(
    f: PiecewiseFunction, j: JumpData, iv: Interval, method, n: int
) -> float:
    """Classical rule on the regularized integrand plus the closed-form tail.

    ``method`` is ``trap``, ``simpson13``, ``simpson38`` or ``gl:<m>``; ``n``
    is the number of cells (composite Gauss-Legendre uses one rule per cell).
    """
    method = parse_method(method)
    if not (iv.a <= j.breakpoint <= iv.b):
        raise ValueError(f"breakpoint {j.breakpoint} outside [{iv.a}, {iv.b}]")
    g = build_regularized(f, j)
    if method.is_grid:
        base = apply_grid_rule(method, GridSamples.from_function(g, iv, n))
    else:
        base = gauss_legendre_composite(g, iv, n, method.points)
    return base + correction_tail_integral(j, iv.b)


def regularize_samples(s: GridSamples, j: JumpData) -> GridSamples:
    """Subtract the jump polynomial from every sample at or right of ``x*``."""
    if not s.interval.contains_strictly(j.breakpoint):
        raise ValueError(
            f"breakpoint {j.breakpoint} not strictly inside [{s.interval.a}, {s.interval.b}]"
        )
    x = s.nodes
    right = x >= j.breakpoint
    values = np.array(s.values, dtype=float, copy=True)
    values[right] -= jump_taylor_eval(j, x[right])
    return s.with_values(values)


def corrected_grid_rule(s: GridSamples, j: JumpData, method) -> float:
    """One corrected Newton-Cotes value from nodal data."""
    return apply_grid_rule(method, regularize_samples(s, j)) + correction_tail_integral(
        j, s.interval.b
    )


class GridCorrection(NamedTuple):
    """Corrected values per rule; ``None`` where ``n`` is not admissible."""

    trapezoid: Optional[float]
    simpson13: Optional[float]
    simpson38: Optional[float]


def corrected_integrate_grid(s: GridSamples, j: JumpData) -> GridCorrection:
    """Corrected trapezoid, Simpson 1/3 and Simpson 3/8 values from one grid."""
    reg = regularize_samples(s, j)
    tail = correction_tail_integral(j, s.interval.b)
    out = []
    for kind in ("trap", "simpson13", "simpson38"):
        m = parse_method(kind)
        out.append(apply_grid_rule(m, reg) + tail if s.n % m.cell_multiple == 0 else None)
    return GridCorrection(*out)


def theorem1_error_bound(sup_left: float, sup_right: float, l: int, xstar: float, b: float) -> float:
    """Bound on ``|int f - int f- - tail|`` from the Taylor remainder.

    ``sup_left`` and ``sup_right`` are sup norms of the ``(l+1)``-th
    derivatives of the two branches on the integration interval.
    """
    if sup_left < 0 or sup_right < 0:
        raise ValueError("sup norms must be non-negative")
    return (sup_left + sup_right) / math.factorial(l + 1) * (b - xstar) ** (l + 2)
