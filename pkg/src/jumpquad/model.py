"""Core value types shared by the rest of the package.

Nothing in here integrates anything; it only describes piecewise integrands,
jump vectors, uniform samples, reference rules and refinement results.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import Polynomial

RealFn = Callable[[np.ndarray], np.ndarray]


class QuadratureError(Exception):
    """Base class for numerical failures raised by this package."""


class ConfigurationError(QuadratureError, ValueError):
    """An operation was asked for something its inputs cannot supply."""


class NoDiscontinuityError(QuadratureError):
    """Sampled data shows no clear isolated discontinuity."""


class OracleError(QuadratureError):
    """A reference integral failed to converge."""


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError(f"interval endpoints must be finite, got [{a}, {b}]")
        if not a < b:
            raise ValueError(f"interval requires a < b, got [{a}, {b}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def length(self) -> float:
        return self.b - self.a

    def contains_strictly(self, x: float) -> bool:
        return self.a < x < self.b


@dataclass(frozen=True)
class PiecewiseFunction:
    """Integrand made of two smooth branches glued at ``breakpoint``.

    Both branches must be evaluable on the whole integration interval, not
    only on their own side: the correction evaluates the left branch to the
    right of the breakpoint. The point ``breakpoint`` itself belongs to the
    right branch.

    ``left_derivs[k - 1]`` / ``right_derivs[k - 1]`` hold the k-th derivative
    of each branch. All callables are expected to accept numpy arrays.
    """

    left_eval: RealFn
    right_eval: RealFn
    breakpoint: float
    left_derivs: tuple = ()
    right_derivs: tuple = ()
    max_smoothness: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "breakpoint", float(self.breakpoint))
        object.__setattr__(self, "left_derivs", tuple(self.left_derivs))
        object.__setattr__(self, "right_derivs", tuple(self.right_derivs))

    def __call__(self, x):
        return eval_piecewise(self, x)

    @property
    def derivative_order(self) -> int:
        """Highest derivative order available on both branches."""
        return min(len(self.left_derivs), len(self.right_derivs))

    def branch_derivative(self, side: str, k: int) -> RealFn:
        if k == 0:
            return self.left_eval if side == "left" else self.right_eval
        derivs = self.left_derivs if side == "left" else self.right_derivs
        if k > len(derivs):
            raise ConfigurationError(
                f"no evaluator for derivative order {k} of the {side} branch "
                f"(only {len(derivs)} supplied)"
            )
        return derivs[k - 1]

    @classmethod
    def from_polynomials(cls, left, right, breakpoint: float) -> "PiecewiseFunction":
        """Build from constant-first coefficient lists (or Polynomial objects).

        Derivative evaluators are generated for at least 20 orders (more for
        very high degrees) so any jump order a rule can ask for is available.
        """
        pl = left if isinstance(left, Polynomial) else Polynomial(np.asarray(left, float))
        pr = right if isinstance(right, Polynomial) else Polynomial(np.asarray(right, float))
        top = max(pl.degree() + 1, pr.degree() + 1, 20)
        return cls(
            left_eval=pl,
            right_eval=pr,
            breakpoint=breakpoint,
            left_derivs=tuple(pl.deriv(k) for k in range(1, top + 1)),
            right_derivs=tuple(pr.deriv(k) for k in range(1, top + 1)),
            max_smoothness=None,
        )


@dataclass(frozen=True)
class JumpData:
    """Breakpoint location and the jumps ``[f^(k)]`` for ``k = 0..order``."""

    breakpoint: float
    jumps: tuple

    def __post_init__(self):
        jumps = tuple(float(v) for v in self.jumps)
        if not jumps:
            raise ValueError("jump vector must have at least one entry")
        if not all(math.isfinite(v) for v in jumps):
            raise ValueError(f"jump vector has non-finite entries: {jumps}")
        object.__setattr__(self, "jumps", jumps)
        object.__setattr__(self, "breakpoint", float(self.breakpoint))

    @property
    def order(self) -> int:
        return len(self.jumps) - 1

    def truncated(self, l: int) -> "JumpData":
        if l > self.order:
            raise ConfigurationError(f"jump data only holds order {self.order}, asked for {l}")
        return JumpData(self.breakpoint, self.jumps[: l + 1])

    @classmethod
    def zeros(cls, breakpoint: float, l: int) -> "JumpData":
        return cls(breakpoint, (0.0,) * (l + 1))


@dataclass(frozen=True)
class GridSamples:
    """Values on the uniform grid ``a + i*h``, ``i = 0..n`` (``n`` cells)."""

    interval: Interval
    n: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if self.n < 1:
            raise ValueError(f"grid needs at least one cell, got n={self.n}")
        if values.shape != (self.n + 1,):
            raise ValueError(f"expected {self.n + 1} values for n={self.n}, got shape {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def h(self) -> float:
        return self.interval.length / self.n

    @property
    def nodes(self) -> np.ndarray:
        return self.interval.a + np.arange(self.n + 1) * self.h

    @classmethod
    def from_function(cls, f, interval: Interval, n: int) -> "GridSamples":
        nodes = interval.a + np.arange(n + 1) * (interval.length / n)
        return cls(interval, n, np.asarray(f(nodes), dtype=float))

    def with_values(self, values) -> "GridSamples":
        return GridSamples(self.interval, self.n, values)


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights on the reference interval [-1, 1]."""

    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    exactness_degree: int
    name: str = ""

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if nodes.size and (nodes[0] < -1 or nodes[-1] > 1):
            raise ValueError("nodes must lie in [-1, 1]")
        if np.any(weights <= 0):
            raise ValueError("weights must be positive")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return self.nodes.size


@dataclass(frozen=True)
class RefinementLevel:
    n: int
    error: float
    order: Optional[float] = None


@dataclass(frozen=True)
class RefinementReport:
    levels: tuple
    rule_name: str
    function_name: str

    @property
    def ns(self) -> np.ndarray:
        return np.array([lv.n for lv in self.levels])

    @property
    def errors(self) -> np.ndarray:
        return np.array([lv.error for lv in self.levels])

    @property
    def orders(self) -> list:
        return [lv.order for lv in self.levels]


def eval_piecewise(f: PiecewiseFunction, x):
    """Left branch strictly left of the breakpoint, right branch elsewhere."""
    if np.ndim(x) == 0:
        x = float(x)
        return float(f.left_eval(x)) if x < f.breakpoint else float(f.right_eval(x))
    x = np.asarray(x, dtype=float)
    return np.where(x < f.breakpoint, f.left_eval(x), f.right_eval(x))


def jumps_from_analytic(f: PiecewiseFunction, l: int, at: Optional[float] = None) -> JumpData:
    """Jump vector ``f+^(k)(x*) - f-^(k)(x*)`` for ``k = 0..l``.

    ``at`` evaluates the branch differences at another location instead of
    the function's own breakpoint; this is what a perturbed breakpoint
    estimate would see when both branches are known analytically.
    """
    if l < 0:
        raise ValueError(f"jump order must be non-negative, got {l}")
    x = f.breakpoint if at is None else float(at)
    jumps = []
    for k in range(l + 1):
        right = f.branch_derivative("right", k)
        left = f.branch_derivative("left", k)
        jumps.append(float(right(x)) - float(left(x)))
    return JumpData(x, tuple(jumps))


def piecewise_from_json(text: str, source: str = "<string>"):
    """Parse a piecewise-polynomial description.

    Expected form: ``{"left": [c0, c1, ...], "right": [d0, ...],
    "breakpoint": x}`` with constant-first coefficients, plus an optional
    ``"interval": [a, b]`` (defaults to ``[-1, 1]``).

    Returns ``(PiecewiseFunction, Interval)``. Raises ``ValueError`` with a
    line or field diagnostic on malformed input.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ValueError(f"{source}: top level must be a JSON object")

    def coeffs(key):
        if key not in data:
            raise ValueError(f"{source}: missing field '{key}'")
        value = data[key]
        if (
            not isinstance(value, list)
            or not value
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in value)
        ):
            raise ValueError(f"{source}: field '{key}' must be a non-empty list of numbers")
        return [float(c) for c in value]

    left, right = coeffs("left"), coeffs("right")
    if "breakpoint" not in data:
        raise ValueError(f"{source}: missing field 'breakpoint'")
    bp = data["breakpoint"]
    if isinstance(bp, bool) or not isinstance(bp, (int, float)) or not math.isfinite(bp):
        raise ValueError(f"{source}: field 'breakpoint' must be a finite number")

    raw_iv = data.get("interval", [-1.0, 1.0])
    if (
        not isinstance(raw_iv, list)
        or len(raw_iv) != 2
        or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in raw_iv)
    ):
        raise ValueError(f"{source}: field 'interval' must be a list [a, b]")
    try:
        iv = Interval(*raw_iv)
    except ValueError as exc:
        raise ValueError(f"{source}: field 'interval': {exc}") from None
    if not iv.contains_strictly(bp):
        raise ValueError(f"{source}: field 'breakpoint' must lie strictly inside {[iv.a, iv.b]}")
    return PiecewiseFunction.from_polynomials(left, right, bp), iv

