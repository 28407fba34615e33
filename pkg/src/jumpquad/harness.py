"""Experiment drivers: refinement studies, Monte Carlo, perturbation, oracles.

Random draws use numpy's PCG64 generator. Trial ``t`` of a study seeded with
``seed`` draws from ``Generator(PCG64(SeedSequence([seed, t])))``, so each
trial is reproducible on its own and the order of execution is irrelevant.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .correction import (
    corrected_grid_rule,
    corrected_integrate_analytic,
    default_order,
)
from .detect import estimate_jumps, locate_discontinuity
from .functions import TestProblem, get_problem, polynomial_problem
from .model import (
    ConfigurationError,
    GridSamples,
    Interval,
    JumpData,
    NoDiscontinuityError,
    OracleError,
    RefinementLevel,
    RefinementReport,
    jumps_from_analytic,
)
from .rules import (
    apply_grid_rule,
    gauss_legendre_composite,
    parse_method,
)

log = logging.getLogger(__name__)

# errors at or below this are treated as roundoff when fitting orders
ROUNDOFF_FLOOR = 100 * np.finfo(float).eps


def fmt(x) -> str:
    """16 significant digits, locale independent; blank for ``None``."""
    if x is None:
        return ""
    return format(float(x), ".16g")


def convergence_order(e_prev: float, e_next: float, n_prev: int, n_next: int) -> Optional[float]:
    """Observed order ``ln(e_prev/e_next) / ln(n_next/n_prev)``.

    Positive when the error decays as ``n`` grows. ``None`` if either error
    is zero.
    """
    if n_prev <= 0 or n_next <= n_prev:
        raise ValueError(f"need 0 < n_prev < n_next, got {n_prev}, {n_next}")
    if e_prev < 0 or e_next < 0:
        raise ValueError("errors must be non-negative")
    if e_prev == 0 or e_next == 0:
        return None
    return math.log(e_prev / e_next) / math.log(n_next / n_prev)


def fitted_order(ns, errors, floor: float = ROUNDOFF_FLOOR) -> Optional[float]:
    """Least-squares slope of ``-log(error)`` against ``log(n)``.

    Only levels with ``error > floor`` take part; ``None`` if fewer than two.
    """
    ns = np.asarray(ns, dtype=float)
    errors = np.asarray(errors, dtype=float)
    keep = errors > floor
    if keep.sum() < 2:
        return None
    slope = np.polyfit(np.log(ns[keep]), np.log(errors[keep]), 1)[0]
    return float(-slope)


def _adaptive_gauss(fn, a: float, b: float, tol: float, max_doublings: int, points: int = 20) -> float:
    x, w = np.polynomial.legendre.leggauss(points)
    prev = None
    cells = 1
    for _ in range(max_doublings + 1):
        h = (b - a) / cells
        left = a + np.arange(cells) * h
        pts = left[:, None] + 0.5 * h * (1.0 + x)[None, :]
        val = float(0.5 * h * (np.asarray(fn(pts)) @ w).sum())
        if prev is not None and abs(val - prev) <= tol * max(1.0, abs(val)):
            return val
        prev = val
        cells *= 2
    raise OracleError(f"adaptive Gauss oracle did not converge on [{a}, {b}]")


def exact_integral_oracle(
    f_name, iv: Optional[Interval] = None, *, tol: float = 1e-14, max_doublings: int = 24
) -> float:
    """Reference value of the integral of a registered function over ``iv``.

    Branches with a closed-form antiderivative are integrated exactly; the
    others by composite 20-point Gauss-Legendre (nodes from numpy, not from
    this package), doubling the cell count until two successive values agree
    to ``tol`` relative to ``max(1, |I|)``.
    """
    prob = f_name if isinstance(f_name, TestProblem) else get_problem(f_name)
    iv = prob.interval if iv is None else iv
    xs = prob.func.breakpoint
    pieces = []
    if iv.a < xs:
        pieces.append(("left", iv.a, min(xs, iv.b)))
    if iv.b > xs:
        pieces.append(("right", max(xs, iv.a), iv.b))
    total = 0.0
    for side, lo, hi in pieces:
        anti = prob.left_antideriv if side == "left" else prob.right_antideriv
        fn = prob.func.left_eval if side == "left" else prob.func.right_eval
        if anti is not None:
            total += anti(hi) - anti(lo)
        else:
            total += _adaptive_gauss(fn, lo, hi, tol, max_doublings)
    return total


@dataclass(frozen=True)
class StudyConfig:
    function_name: str
    rule: str
    levels: tuple
    corrected: bool = True
    jump_source: str = "analytic"
    seed: int = 0
    jump_order: Optional[int] = None
    deriv_order: int = 0
    stencil: Optional[int] = None

    def __post_init__(self):
        levels = tuple(int(n) for n in self.levels)
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise ValueError(f"levels must be strictly increasing, got {levels}")
        if self.jump_source not in ("analytic", "estimated"):
            raise ValueError(f"jump_source must be 'analytic' or 'estimated', got {self.jump_source!r}")
        object.__setattr__(self, "levels", levels)


def _grid_jumps(samples: GridSamples, l: int, deriv_order: int, stencil: Optional[int]) -> JumpData:
    det = locate_discontinuity(samples, deriv_order)
    return estimate_jumps(samples, det.x_estimate, l, stencil if stencil is not None else l + 2)


def integrate_problem(
    prob: TestProblem,
    method,
    n: int,
    *,
    corrected: bool,
    jump_source: str = "analytic",
    l: Optional[int] = None,
    deriv_order: int = 0,
    stencil: Optional[int] = None,
) -> float:
    """One (possibly corrected) integral of ``prob`` on ``n`` cells."""
    method = parse_method(method)
    iv = prob.interval
    l = default_order(method) if l is None else l
    if method.is_grid:
        samples = GridSamples.from_function(prob.func, iv, n)
        if not corrected:
            return apply_grid_rule(method, samples)
        if jump_source == "analytic":
            j = jumps_from_analytic(prob.func, l)
        else:
            try:
                j = _grid_jumps(samples, l, deriv_order, stencil)
            except NoDiscontinuityError as exc:
                log.info("%s n=%d: %s; using the classical rule", prob.name, n, exc)
                return apply_grid_rule(method, samples)
        return corrected_grid_rule(samples, j, method)

    if not corrected:
        return gauss_legendre_composite(prob.func, iv, n, method.points)
    if jump_source == "analytic":
        j = jumps_from_analytic(prob.func, l)
    else:
        samples = GridSamples.from_function(prob.func, iv, n)
        try:
            j = _grid_jumps(samples, l, deriv_order, stencil)
        except NoDiscontinuityError as exc:
            log.info("%s n=%d: %s; using the classical rule", prob.name, n, exc)
            return gauss_legendre_composite(prob.func, iv, n, method.points)
    return corrected_integrate_analytic(prob.func, j, iv, method, n)


def report_from_errors(ns, errors, rule_name: str, function_name: str) -> RefinementReport:
    levels = []
    for i, (n, e) in enumerate(zip(ns, errors)):
        order = None if i == 0 else convergence_order(errors[i - 1], e, ns[i - 1], n)
        levels.append(RefinementLevel(int(n), float(e), order))
    return RefinementReport(tuple(levels), rule_name, function_name)


def refinement_study(cfg: StudyConfig) -> RefinementReport:
    """Error and observed order per level.

    Requested cell counts are rounded up to the rule's admissible multiple
    (Simpson 1/3: even, Simpson 3/8: multiple of 3); the report records the
    counts actually used.
    """
    prob = get_problem(cfg.function_name)
    method = parse_method(cfg.rule)
    exact = exact_integral_oracle(prob)
    ns, errors = [], []
    for requested in cfg.levels:
        n = method.admissible_n(requested)
        if ns and n <= ns[-1]:
            raise ValueError(f"level {requested} collapses onto n={ns[-1]} after rounding")
        approx = integrate_problem(
            prob,
            method,
            n,
            corrected=cfg.corrected,
            jump_source=cfg.jump_source,
            l=cfg.jump_order,
            deriv_order=cfg.deriv_order,
            stencil=cfg.stencil,
        )
        ns.append(n)
        errors.append(abs(exact - approx))
    name = f"{'corrected ' if cfg.corrected else ''}{method}"
    return report_from_errors(ns, errors, name, cfg.function_name)


def report_csv(report: RefinementReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level_n", "error", "order"])
    for lv in report.levels:
        w.writerow([lv.n, fmt(lv.error), fmt(lv.order)])
    return buf.getvalue()


class TrialRecord(NamedTuple):
    trial: int
    x_star: float
    err_classical: float
    err_corrected: float


class MonteCarloResult(NamedTuple):
    max_classical: float
    max_corrected: float
    per_trial: list


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(trial)])))


def _poly_exact(prob: TestProblem) -> float:
    # closed-form antiderivatives; independent of any quadrature
    xs, iv = prob.func.breakpoint, prob.interval
    return (prob.left_antideriv(xs) - prob.left_antideriv(iv.a)) + (
        prob.right_antideriv(iv.b) - prob.right_antideriv(xs)
    )


def random_breakpoint_study(n_points: int, trials: int, seed: int) -> MonteCarloResult:
    """Single-cell ``n_points`` Gauss-Legendre on the matching piecewise polynomial.

    Each trial places the break uniformly in ``(-1 + 1e-6, 1 - 1e-6)`` and
    integrates with and without the correction (exact jumps of order
    ``2 n_points - 1``).
    """
    if n_points not in (2, 3, 4, 5):
        raise ValueError(f"n_points must be in 2..5, got {n_points}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    method = parse_method(f"gl:{n_points}")
    l = method.exactness_degree
    records = []
    for t in range(trials):
        xs = float(trial_rng(seed, t).uniform(-1.0 + 1e-6, 1.0 - 1e-6))
        prob = polynomial_problem(n_points, xs)
        exact = _poly_exact(prob)
        classical = gauss_legendre_composite(prob.func, prob.interval, 1, n_points)
        j = jumps_from_analytic(prob.func, l)
        corrected = corrected_integrate_analytic(prob.func, j, prob.interval, method, 1)
        records.append(TrialRecord(t, xs, abs(exact - classical), abs(exact - corrected)))
    return MonteCarloResult(
        max(r.err_classical for r in records),
        max(r.err_corrected for r in records),
        records,
    )


def monte_carlo_csv(result: MonteCarloResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["trial", "x_star", "err_classical", "err_corrected"])
    for r in result.per_trial:
        w.writerow([r.trial, fmt(r.x_star), fmt(r.err_classical), fmt(r.err_corrected)])
    return buf.getvalue()


class PerturbationPoint(NamedTuple):
    beta: float
    error: Optional[float]  # None when the shifted break left the interval


def location_perturbation_study(
    f_name,
    betas: Sequence[float],
    l: Optional[int] = None,
    method="gl:2",
    n: int = 1,
) -> list:
    """Corrected error when the break is assumed at ``x* + beta``.

    Jumps are re-evaluated analytically at the shifted location, while the
    integrand itself keeps its true break. Shifts that leave the open
    interval are skipped (error ``None``) with a logged notice.
    """
    prob = f_name if isinstance(f_name, TestProblem) else get_problem(f_name)
    method = parse_method(method)
    l = default_order(method) if l is None else l
    n = method.admissible_n(n)
    exact = exact_integral_oracle(prob)
    iv = prob.interval
    out = []
    for beta in betas:
        shifted = prob.func.breakpoint + float(beta)
        if not iv.contains_strictly(shifted):
            log.warning("beta=%g moves the break to %g, outside (%g, %g); skipped", beta, shifted, iv.a, iv.b)
            out.append(PerturbationPoint(float(beta), None))
            continue
        j = jumps_from_analytic(prob.func, l, at=shifted)
        approx = corrected_integrate_analytic(prob.func, j, iv, method, n)
        out.append(PerturbationPoint(float(beta), abs(exact - approx)))
    return out


# ---------------------------------------------------------------------------
# Reference experiments. Each returns {table_name: ExperimentTable}.


@dataclass
class ExperimentSeries:
    rule: str
    classical: RefinementReport
    corrected: RefinementReport


@dataclass
class ExperimentTable:
    name: str
    series: list = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(
            ["rule", "level_n", "error_classical", "order_classical", "error_corrected", "order_corrected"]
        )
        for s in self.series:
            for c, k in zip(s.classical.levels, s.corrected.levels):
                w.writerow([s.rule, c.n, fmt(c.error), fmt(c.order), fmt(k.error), fmt(k.order)])
        return buf.getvalue()


def _pair(function_name, rule, levels, **kw) -> ExperimentSeries:
    classical = refinement_study(StudyConfig(function_name, rule, levels, corrected=False))
    corrected = refinement_study(StudyConfig(function_name, rule, levels, corrected=True, **kw))
    return ExperimentSeries(str(parse_method(rule)), classical, corrected)


NEWTON_COTES_LEVELS = tuple(2**i for i in range(4, 14))
GAUSS_COMPOSITE_LEVELS = tuple(2**i for i in range(3, 10))


def experiment1(levels=NEWTON_COTES_LEVELS) -> dict:
    """Jump in f: trapezoid, Simpson 1/3 and Simpson 3/8 with exact jumps."""
    tables = {}
    for table, rule in (("conv", "trap"), ("s_1_3", "simpson13"), ("s3_8", "simpson38")):
        tables[table] = ExperimentTable(table, [_pair("exp1", rule, levels)])
    return tables


def experiment2(levels=NEWTON_COTES_LEVELS, l: int = 3, stencil: int = 5, deriv_order: int = 1) -> dict:
    """Jump in f': location and jumps estimated from the samples."""
    series = _pair(
        "exp2",
        "simpson13",
        levels,
        jump_source="estimated",
        jump_order=l,
        stencil=stencil,
        deriv_order=deriv_order,
    )
    return {"s_1_3_corner": ExperimentTable("s_1_3_corner", [series])}


def experiment3(points: Sequence[int] = (2, 3, 4, 5), trials: int = 1000, seed: int = 0) -> dict:
    """Random break positions; returns ``{points: MonteCarloResult}``."""
    return {m: random_breakpoint_study(m, trials, seed) for m in points}


def experiment3_summary_csv(results: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["points", "max_classical", "max_corrected"])
    for m, r in results.items():
        w.writerow([m, fmt(r.max_classical), fmt(r.max_corrected)])
    return buf.getvalue()


def experiment4(levels=GAUSS_COMPOSITE_LEVELS, points: Sequence[int] = (2, 3, 4, 5)) -> dict:
    """Composite Gauss-Legendre with exact jumps on exp(x^2) | sin(x)."""
    table = ExperimentTable("tabla_exp4", [_pair("exp4", f"gl:{m}", levels) for m in points])
    return {"tabla_exp4": table}

