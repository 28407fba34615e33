"""Locate an isolated discontinuity in uniform samples and estimate its jumps.

Detection works in two stages. First, the cell whose neighbouring
divided differences of order ``deriv_order + 1`` are largest is flagged.
Then one-sided interpolants are built from the nodes left and right of that
cell, and the breakpoint is placed at the root of their difference inside
the cell. If the difference does not change sign (the function itself
jumps), the cell midpoint is used.

Jumps are the derivative differences of the two one-sided Newton
interpolants at the estimated breakpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .model import GridSamples, JumpData, NoDiscontinuityError

CONFIDENCE_THRESHOLD = 3.0


@dataclass(frozen=True)
class DetectionResult:
    cell_index: int
    x_estimate: float
    confidence: float


def divided_differences(x, y) -> np.ndarray:
    """Newton coefficients ``f[x0], f[x0,x1], ..., f[x0..xm]``."""
    x = np.asarray(x, dtype=float)
    coef = np.array(y, dtype=float, copy=True)
    for j in range(1, len(x)):
        coef[j:] = (coef[j:] - coef[j - 1 : -1]) / (x[j:] - x[: -j])
    return coef


def newton_taylor_coefficients(x, coef, z: float) -> np.ndarray:
    """Re-expand a Newton-form polynomial in powers of ``(t - z)``.

    Entry k of the result is ``p^(k)(z) / k!``.
    """
    m = len(coef)
    out = np.zeros(m)
    out[0] = coef[-1]
    deg = 0
    for j in range(m - 2, -1, -1):
        # out <- out * ((t - z) + (z - x_j)) + coef[j]
        shift = z - x[j]
        out[1 : deg + 2] = out[: deg + 1] + shift * out[1 : deg + 2]
        out[0] = shift * out[0] + coef[j]
        deg += 1
    return out


def newton_eval(x, coef, t):
    t = np.asarray(t, dtype=float)
    acc = np.full_like(t, coef[-1])
    for j in range(len(coef) - 2, -1, -1):
        acc = acc * (t - x[j]) + coef[j]
    return acc


def _one_sided(nodes, values, idx):
    xs, ys = nodes[idx], values[idx]
    return xs, divided_differences(xs, ys)


def locate_discontinuity(s: GridSamples, deriv_order: int = 0, stencil: int | None = None) -> DetectionResult:
    """Find the cell holding an isolated jump in ``f^(deriv_order)``.

    ``stencil`` is the number of nodes per side used for sub-cell
    refinement (default ``deriv_order + 3``). Raises
    ``NoDiscontinuityError`` when the largest divided difference is less than
    three times the median, which is how smooth data looks.
    """
    d = int(deriv_order)
    if d < 0:
        raise ValueError(f"deriv_order must be non-negative, got {d}")
    if s.n < 2 * (d + 3):
        raise ValueError(f"need at least {2 * (d + 3)} cells to detect order {d}, got n={s.n}")
    k = d + 3 if stencil is None else int(stencil)

    h = s.h
    v = np.asarray(s.values, dtype=float)
    dd = np.abs(np.diff(v, d + 1)) / (math.factorial(d + 1) * h ** (d + 1))
    peak = float(dd.max())
    median = float(np.median(dd))
    if peak == 0.0:
        raise NoDiscontinuityError("samples have identically zero divided differences")
    confidence = math.inf if median == 0.0 else peak / median
    if confidence < CONFIDENCE_THRESHOLD:
        raise NoDiscontinuityError(
            f"no clear discontinuity (max/median divided difference = {confidence:.3g})"
        )

    # stencil i spans cells i..i+d; a singular cell c taints stencils c-d..c
    score = np.convolve(dd, np.ones(d + 1))
    cell = int(np.argmax(score))

    nodes = s.nodes
    x_lo, x_hi = nodes[cell], nodes[cell + 1]
    kl = min(k, cell + 1)
    kr = min(k, s.n - cell)
    xl, cl = _one_sided(nodes, v, np.arange(cell - kl + 1, cell + 1))
    xr, cr = _one_sided(nodes, v, np.arange(cell + 1, cell + 1 + kr))

    def gap(t):
        return float(newton_eval(xr, cr, t) - newton_eval(xl, cl, t))

    g_lo, g_hi = gap(x_lo), gap(x_hi)
    if g_lo == 0.0:
        x_est = x_lo
    elif g_hi == 0.0:
        x_est = x_hi
    elif g_lo * g_hi < 0.0:
        x_est = brentq(gap, x_lo, x_hi, xtol=1e-15 * max(1.0, abs(x_hi)), rtol=4 * np.finfo(float).eps)
    else:
        x_est = 0.5 * (x_lo + x_hi)
    return DetectionResult(cell, float(x_est), float(confidence))


def estimate_jumps(s: GridSamples, x_estimate: float, l: int, stencil: int) -> JumpData:
    """Jumps ``[f^(k)]``, ``k = 0..l``, from one-sided Newton interpolation.

    The ``stencil`` nodes nearest to ``x_estimate`` on each side are used;
    a node exactly at ``x_estimate`` counts as a right-side node.
    """
    if stencil < l + 1:
        raise ValueError(f"stencil {stencil} too small for jump order {l}")
    nodes = s.nodes
    v = np.asarray(s.values, dtype=float)
    left_idx = np.flatnonzero(nodes < x_estimate)
    right_idx = np.flatnonzero(nodes >= x_estimate)
    if left_idx.size < stencil or right_idx.size < stencil:
        raise ValueError(
            f"need {stencil} nodes on each side of {x_estimate}, "
            f"have {left_idx.size} left and {right_idx.size} right"
        )
    # nearest nodes first keeps the Newton form well conditioned at x_estimate
    xl, cl = _one_sided(nodes, v, left_idx[-stencil:][::-1])
    xr, cr = _one_sided(nodes, v, right_idx[:stencil])
    tl = newton_taylor_coefficients(xl, cl, x_estimate)
    tr = newton_taylor_coefficients(xr, cr, x_estimate)
    jumps = [(tr[k] - tl[k]) * math.factorial(k) for k in range(l + 1)]
    return JumpData(x_estimate, tuple(jumps))
