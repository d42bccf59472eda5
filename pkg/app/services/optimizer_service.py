"""One dimensional concave maximization over a closed interval.

Every solver in the package funnels through ``maximize_concave``: derivative
bisection when a slope is available, golden-section search otherwise.
"""

import math
from typing import Callable, Optional, Tuple

from app.core.config import settings
from app.core.exceptions import ArgumentError, NumericError
from app.models.domain import PrivacyInterval
from app.models.schemas.optimization import BoundaryFlag, OptResult

Evaluator = Callable[[float], float]

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI_SQ = (3 - math.sqrt(5)) / 2


def _evaluate(fn: Evaluator, x: float, what: str) -> float:
    value = fn(x)
    if math.isnan(value):
        raise NumericError(x, what)
    return value


def _bisect_sign(
    slope: Evaluator, lo: float, hi: float, tol: float, positive_side_left: bool
) -> Tuple[float, float, int]:
    """Shrink [lo, hi] around the point where the slope changes sign.

    With ``positive_side_left`` the invariant is slope(lo) > 0 and
    slope(hi) <= 0; otherwise slope(lo) >= 0 and slope(hi) < 0.
    """
    iterations = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        s = _evaluate(slope, mid, "slope")
        iterations += 1
        if (s > 0) if positive_side_left else (s >= 0):
            lo = mid
        else:
            hi = mid
    return lo, hi, iterations


def _maximize_by_slope(
    f: Evaluator, slope: Evaluator, x_min: float, x_max: float, tol: float
) -> OptResult:
    s_lo = _evaluate(slope, x_min, "slope")
    if s_lo <= 0:
        return OptResult(
            argmax=x_min,
            max_value=_evaluate(f, x_min, "objective"),
            at_boundary=BoundaryFlag.LOWER,
            iterations=1,
            residual=0.0,
        )
    s_hi = _evaluate(slope, x_max, "slope")
    if s_hi >= 0:
        return OptResult(
            argmax=x_max,
            max_value=_evaluate(f, x_max, "objective"),
            at_boundary=BoundaryFlag.UPPER,
            iterations=2,
            residual=0.0,
        )

    lo, hi = x_min, x_max
    iterations = 2
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        s = _evaluate(slope, mid, "slope")
        iterations += 1
        if s > 0:
            lo = mid
        elif s < 0:
            hi = mid
        else:
            # Flat top: locate both edges of the zero-slope bracket
            left_lo, left_hi, n_left = _bisect_sign(slope, lo, mid, tol, True)
            right_lo, right_hi, n_right = _bisect_sign(slope, mid, hi, tol, False)
            iterations += n_left + n_right
            lo, hi = 0.5 * (left_lo + left_hi), 0.5 * (right_lo + right_hi)
            break
    argmax = 0.5 * (lo + hi)
    return OptResult(
        argmax=argmax,
        max_value=_evaluate(f, argmax, "objective"),
        at_boundary=BoundaryFlag.INTERIOR,
        iterations=iterations,
        residual=abs(_evaluate(slope, argmax, "slope")),
    )


def _maximize_golden(f: Evaluator, x_min: float, x_max: float, tol: float) -> OptResult:
    a, b = x_min, x_max
    dist = b - a
    c = a + INV_PHI_SQ * dist
    d = a + INV_PHI * dist
    yc = _evaluate(f, c, "objective")
    yd = _evaluate(f, d, "objective")
    iterations = 2
    while dist > tol:
        if yc >= yd:
            b = d
            d = c
            yd = yc
            dist = INV_PHI * dist
            c = a + INV_PHI_SQ * dist
            yc = _evaluate(f, c, "objective")
        else:
            a = c
            c = d
            yc = yd
            dist = INV_PHI * dist
            d = a + INV_PHI * dist
            yd = _evaluate(f, d, "objective")
        iterations += 1
    argmax = 0.5 * (a + b)
    best = _evaluate(f, argmax, "objective")

    flag = BoundaryFlag.INTERIOR
    if argmax - x_min <= tol:
        low_value = _evaluate(f, x_min, "objective")
        if low_value >= best:
            argmax, best, flag = x_min, low_value, BoundaryFlag.LOWER
    elif x_max - argmax <= tol:
        high_value = _evaluate(f, x_max, "objective")
        if high_value >= best:
            argmax, best, flag = x_max, high_value, BoundaryFlag.UPPER
    return OptResult(
        argmax=argmax,
        max_value=best,
        at_boundary=flag,
        iterations=iterations,
        residual=0.0,
    )


def maximize_concave(
    f: Evaluator,
    f_slope: Optional[Evaluator],
    interval: PrivacyInterval,
    tol: Optional[float] = None,
) -> OptResult:
    """Maximize a concave ``f`` over ``interval``.

    Args:
        f: objective, concave on the interval
        f_slope: derivative of ``f``; when given the maximizer is found by
            bisection on its sign, otherwise by golden-section search
        interval: closed interval to search
        tol: final bracket width in x (defaults to the OPT_TOL setting)

    Returns:
        OptResult with ``max_value`` recomputed at ``argmax``
    """
    tol = settings.OPT_TOL if tol is None else tol
    if not tol > 0:
        raise ArgumentError(f"tol must be positive, got {tol}")
    if f_slope is not None:
        return _maximize_by_slope(f, f_slope, interval.x_min, interval.x_max, tol)
    return _maximize_golden(f, interval.x_min, interval.x_max, tol)
