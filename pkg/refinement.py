"""
Refinement helpers for the minimal-time oracle.

Strategy: a coarse grid locates the interesting cell, then a one-dimensional
refinement (golden section for maxima, bisection for threshold crossings)
narrows it down to the requested tolerance.
"""

import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0       # 1 / phi
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0      # 1 / phi^2


def golden_section_max(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-10,
) -> Tuple[float, float]:
    """
    Golden-section search for the maximum of a unimodal f on [lo, hi].

    Reuses one function evaluation per iteration. The end points are
    compared with the interior result, so a maximum on the boundary is found.

    Args:
        f: objective
        lo, hi: bracket
        tol: final bracket width

    Returns:
        (x, f(x)) of the best point seen
    """
    a, b = min(lo, hi), max(lo, hi)
    h = b - a
    candidates = [(a, f(a)), (b, f(b))]
    if h > tol:
        n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
        c = a + INV_PHI2 * h
        d = a + INV_PHI * h
        yc = f(c)
        yd = f(d)
        for _ in range(n):
            if yc >= yd:
                b, d, yd = d, c, yc
                h = INV_PHI * h
                c = a + INV_PHI2 * h
                yc = f(c)
            else:
                a, c, yc = c, d, yd
                h = INV_PHI * h
                d = a + INV_PHI * h
                yd = f(d)
        candidates.extend([(c, yc), (d, yd)])

    # highest value wins; ties go to the smallest x
    return max(candidates, key=lambda item: (item[1], -item[0]))


def scan_then_golden(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    points: int,
    tol: float = 1e-10,
) -> Tuple[float, float]:
    """
    Grid scan followed by golden section on the cell around the best grid point.

    Handles multimodal objectives as long as the grid resolves the peaks.
    """
    if hi <= lo:
        return lo, f(lo)
    grid = np.linspace(lo, hi, max(3, points))
    values = np.array([f(float(x)) for x in grid])
    k = int(np.argmax(values))
    left = float(grid[max(0, k - 1)])
    right = float(grid[min(len(grid) - 1, k + 1)])
    x, fx = golden_section_max(f, left, right, tol)
    if values[k] > fx:
        return float(grid[k]), float(values[k])
    return x, fx


def bisect_crossing(
    reached: Callable[[float], bool],
    lo: float,
    hi: float,
    tol: float,
    max_iterations: int = 200,
) -> float:
    """
    Smallest t in [lo, hi] (to within tol) with reached(t) True.

    Assumes reached(lo) is False and reached(hi) is True.
    """
    for iteration in range(max_iterations):
        if hi - lo <= tol:
            logger.debug("Crossing bracketed after %d bisections: [%.12g, %.12g]", iteration, lo, hi)
            break
        mid = 0.5 * (lo + hi)
        if reached(mid):
            hi = mid
        else:
            lo = mid
    return hi


def expand_bracket(
    reached: Callable[[float], bool],
    lo: float,
    hi: float,
    limit: float,
) -> Optional[Tuple[float, float]]:
    """
    Grow [lo, hi] until reached(hi) holds, doubling the width each time.

    Returns:
        (lo, hi) with reached(hi) True, or None if hi passes `limit` first
    """
    width = max(hi - lo, 1e-12)
    while not reached(hi):
        if hi >= limit:
            return None
        lo = hi
        width *= 2.0
        hi = min(limit, hi + width)
    return lo, hi
