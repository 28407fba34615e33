"""Classical (uncorrected) quadrature.

Composite Newton-Cotes rules act on uniform samples; Gauss-Legendre rules act
on callables, either on a single interval or cell by cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .model import ConfigurationError, GridSamples, Interval, QuadratureRule

MAX_GAUSS_POINTS = 64

_GRID_KINDS = {
    # kind: (exactness degree, required divisor of n)
    "trap": (1, 1),
    "simpson13": (3, 2),
    "simpson38": (3, 3),
}
_ALIASES = {
    "trap": "trap",
    "trapezoid": "trap",
    "simpson13": "simpson13",
    "simpson": "simpson13",
    "simpson38": "simpson38",
}


@dataclass(frozen=True)
class Method:
    """Which rule to apply: ``trap``, ``simpson13``, ``simpson38`` or ``gl`` (``points`` > 0)."""

    kind: str
    points: int = 0

    def __post_init__(self):
        if self.kind == "gl":
            if not 1 <= self.points <= MAX_GAUSS_POINTS:
                raise ValueError(f"Gauss-Legendre needs 1..{MAX_GAUSS_POINTS} points, got {self.points}")
        elif self.kind not in _GRID_KINDS:
            raise ValueError(f"unknown rule kind {self.kind!r}")

    @property
    def is_grid(self) -> bool:
        return self.kind != "gl"

    @property
    def exactness_degree(self) -> int:
        if self.kind == "gl":
            return 2 * self.points - 1
        return _GRID_KINDS[self.kind][0]

    @property
    def cell_multiple(self) -> int:
        if self.kind == "gl":
            return 1
        return _GRID_KINDS[self.kind][1]

    def admissible_n(self, n: int) -> int:
        """Smallest admissible cell count that is >= ``n``."""
        n = int(n)
        if n < 1:
            raise ValueError(f"cell count must be positive, got {n}")
        return n + (-n) % self.cell_multiple

    def __str__(self):
        return f"gl:{self.points}" if self.kind == "gl" else self.kind


def parse_method(text) -> Method:
    """Parse ``trap``, ``simpson13``, ``simpson38`` or ``gl:<m>``."""
    if isinstance(text, Method):
        return text
    t = str(text).strip().lower()
    if t.startswith(("gl:", "gauss:", "gauss-legendre:")):
        head, _, pts = t.partition(":")
        try:
            return Method("gl", int(pts))
        except ValueError as exc:
            raise ValueError(f"bad Gauss-Legendre descriptor {text!r}: {exc}") from None
    if t in _ALIASES:
        return Method(_ALIASES[t])
    raise ValueError(f"unknown method {text!r}; expected trap, simpson13, simpson38 or gl:<m>")


def trapezoid_composite(s: GridSamples) -> float:
    v = s.values
    return s.h * (0.5 * v[0] + v[1:-1].sum() + 0.5 * v[-1])


def simpson13_composite(s: GridSamples) -> float:
    if s.n % 2:
        raise ValueError(f"Simpson 1/3 needs an even number of cells, got n={s.n}")
    v = s.values
    return s.h / 3.0 * (v[0] + 4.0 * v[1:-1:2].sum() + 2.0 * v[2:-1:2].sum() + v[-1])


def simpson38_composite(s: GridSamples) -> float:
    if s.n % 3:
        raise ValueError(f"Simpson 3/8 needs a multiple of 3 cells, got n={s.n}")
    v = s.values
    interior = v[1:-1]
    # interior weights cycle 3, 3, 2
    w = np.tile([3.0, 3.0, 2.0], s.n // 3)[:-1]
    return 3.0 * s.h / 8.0 * (v[0] + np.dot(w, interior) + v[-1])


_GRID_RULES = {
    "trap": trapezoid_composite,
    "simpson13": simpson13_composite,
    "simpson38": simpson38_composite,
}


def apply_grid_rule(method, s: GridSamples) -> float:
    method = parse_method(method)
    if not method.is_grid:
        raise ConfigurationError(f"{method} is not a Newton-Cotes rule")
    return float(_GRID_RULES[method.kind](s))


def legendre_poly_and_deriv(n: int, x):
    """Return ``(P_n(x), P_n'(x))`` by the three-term recurrence.

    Works for scalars and arrays. The derivative follows
    ``P_k' = x P_{k-1}' + k P_{k-1}``, which stays finite at ``x = +-1``.
    """
    if n < 0:
        raise ValueError(f"degree must be non-negative, got {n}")
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    p_prev, dp_prev = np.ones_like(x), np.zeros_like(x)
    if n == 0:
        p, dp = p_prev, dp_prev
    else:
        p, dp = x.copy(), np.ones_like(x)
        for k in range(2, n + 1):
            p_next = ((2 * k - 1) * x * p - (k - 1) * p_prev) / k
            dp_next = x * dp + k * p
            p_prev, p = p, p_next
            dp = dp_next
    if scalar:
        return float(p), float(dp)
    return p, dp


@lru_cache(maxsize=None)
def gauss_legendre_rule(n: int) -> QuadratureRule:
    """n-point Gauss-Legendre rule on [-1, 1].

    Nodes are the roots of P_n found by Newton's method from the
    Chebyshev-like guesses ``cos(pi (i - 1/4) / (n + 1/2))``; weights are
    ``2 / ((1 - x^2) P_n'(x)^2)``.
    """
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_GAUSS_POINTS:
        raise ValueError(f"Gauss-Legendre rule needs 1 <= n <= {MAX_GAUSS_POINTS}, got {n!r}")
    i = np.arange(n, 0, -1)
    x = np.cos(math.pi * (i - 0.25) / (n + 0.5))
    for _ in range(100):
        p, dp = legendre_poly_and_deriv(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    # impose the exact symmetry of the rule
    x = 0.5 * (x - x[::-1])
    if n % 2:
        x[n // 2] = 0.0
    _, dp = legendre_poly_and_deriv(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    w = 0.5 * (w + w[::-1])
    return QuadratureRule(x, w, 2 * n - 1, name=f"gl:{n}")


def _as_rule(rule) -> QuadratureRule:
    if isinstance(rule, QuadratureRule):
        return rule
    return gauss_legendre_rule(int(rule))


def gauss_legendre_integrate(f, iv: Interval, rule) -> float:
    """Apply ``rule`` to ``f`` on ``iv`` through the affine map from [-1, 1]."""
    rule = _as_rule(rule)
    half = 0.5 * (iv.b - iv.a)
    mid = 0.5 * (iv.a + iv.b)
    values = np.asarray(f(mid + half * rule.nodes), dtype=float)
    return float(half * np.dot(rule.weights, values))


def gauss_legendre_composite(f, iv: Interval, cells: int, rule) -> float:
    """Sum of ``rule`` applied on each of ``cells`` equal subintervals of ``iv``."""
    if cells < 1:
        raise ValueError(f"need at least one cell, got {cells}")
    rule = _as_rule(rule)
    h = iv.length / cells
    left = iv.a + np.arange(cells) * h
    pts = left[:, None] + 0.5 * h * (1.0 + rule.nodes)[None, :]
    values = np.asarray(f(pts), dtype=float).reshape(pts.shape)
    return float(0.5 * h * (values @ rule.weights).sum())


def integrate_classical(f, iv: Interval, method, n: int) -> float:
    """Uncorrected composite rule on ``n`` cells (``n`` must be admissible)."""
    method = parse_method(method)
    if method.is_grid:
        return apply_grid_rule(method, GridSamples.from_function(f, iv, n))
    return gauss_legendre_composite(f, iv, n, method.points)
