"""Scalar maximization and bracketed root finding."""

import math
from typing import Callable, Tuple

import numpy as np
from scipy.optimize import bisect

from config import Config
from src.utils import setup_logging

logger = setup_logging()

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


def golden_section_maximize(f: Callable[[float], float], a: float, b: float,
                            tol: float = Config.GOLDEN_TOL) -> Tuple[float, float]:
    """
    Golden-section search for the maximum of a unimodal f on [a, b].

    Returns (x, f(x)) with x within tol of the maximizer. Endpoints are
    compared at the end so a maximum sitting on the bracket edge is found.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)

    # Required steps to achieve tolerance
    steps = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)

    for _ in range(steps - 1):
        if yc > yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)

    candidates = [(c, yc), (d, yd), (a, f(a)), (b, f(b))]
    return max(candidates, key=lambda item: item[1])


def find_bracket_downward(f: Callable[[float], float], start: float, step: float,
                          lower: float = 0.0) -> float:
    """Walk down from start until f < 0; returns that abscissa or raises if none"""
    x = start
    while x - step > lower:
        x = round(x - step, 12)
        if f(x) < 0.0:
            return x
    raise ValueError(f"No sign change found walking down from {start} to {lower}")


def sign_changes(f: Callable[[float], float], a: float, b: float, points: int) -> int:
    """Number of sign changes of f on a uniform scan of [a, b]"""
    values = np.array([f(x) for x in np.linspace(a, b, points)])
    signs = np.sign(values)
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def bisect_root(f: Callable[[float], float], a: float, b: float,
                xtol: float = Config.BISECTION_XTOL) -> float:
    """Bisection for a root of f in [a, b] with f(a) f(b) < 0"""
    root = bisect(f, a, b, xtol=xtol)
    logger.debug(f"Bisection root {root:.12g} in [{a}, {b}]")
    return float(root)
