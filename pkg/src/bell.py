"""
Phase-space CHSH function for the symmetric Gaussian family (n, c).

Displacements (0, sqrt(I), -sqrt(I)) on both modes; local theories bound the
combination by 2. The closed-form maximum carries -n/(n + 2c) in its middle exponent.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np
import pandas as pd

from config import Config
from src.exceptions import DomainError, SingularStateError, UnphysicalPointError
from src.optimize import golden_section_maximize
from src.utils import setup_logging

logger = setup_logging()


class Region(str, Enum):
    I = "I"
    II = "II"
    III = "III"
    UNPHYSICAL = "unphysical"


@dataclass(frozen=True)
class BellEvaluation:
    displacement_intensity: float
    value: float

    @property
    def violates(self) -> bool:
        return self.value > Config.LOCAL_BOUND

    def as_dict(self) -> dict:
        return {
            "displacement_intensity": self.displacement_intensity,
            "value": self.value,
            "violates": self.violates
        }


@dataclass(frozen=True)
class RegionVerdict:
    mu_s: float
    C_ab: float
    region: Region
    boundaries: Tuple[float, float, float]  # (mu_D, mu_B, mu_P)

    def as_dict(self) -> dict:
        mu_d, mu_b, mu_p = self.boundaries
        return {
            "mu_s": self.mu_s,
            "C_ab": self.C_ab,
            "region": self.region.value,
            "mu_D": mu_d,
            "mu_B": mu_b,
            "mu_P": mu_p
        }


def _check_state(n: float, c: float):
    if not (math.isfinite(n) and math.isfinite(c)) or n < Config.VACUUM_VARIANCE * (1.0 - Config.TOLERANCE):
        raise DomainError(f"Bell function needs n >= 1/2, got n = {n}")
    if abs(c) >= n:
        raise SingularStateError(f"|c| = {abs(c)} >= n = {n}: covariance matrix is singular")


def _check_maximizable(n: float, c: float):
    _check_state(n, c)
    if c < 0.0:
        raise DomainError(f"Maximization is defined for c >= 0 (normalize the sign first), got c = {c}")


def bell_function(intensity: float, n: float, c: float) -> float:
    """Bell value for displacement intensity I on the state (n, c)"""
    _check_state(n, c)
    if intensity < 0.0:
        raise DomainError(f"Displacement intensity must be >= 0, got {intensity}")

    det = n * n - c * c
    bracket = (1.0
               + 2.0 * math.exp(-n * intensity / det)
               - math.exp(-2.0 * (n + c) * intensity / det))
    return bracket / (4.0 * det)


def bell_evaluation(intensity: float, n: float, c: float) -> BellEvaluation:
    return BellEvaluation(displacement_intensity=intensity, value=bell_function(intensity, n, c))


def optimal_displacement(n: float, c: float) -> float:
    """Stationary point of the Bell function in I"""
    _check_maximizable(n, c)
    return (n * n - c * c) / (n + 2.0 * c) * math.log((n + c) / n)


def bell_max(n: float, c: float) -> float:
    """Bell value at the optimal displacement"""
    _check_maximizable(n, c)
    r = (n + c) / n
    bracket = (1.0
               + 2.0 * r ** (-n / (n + 2.0 * c))
               - r ** (-2.0 * (n + c) / (n + 2.0 * c)))
    return bracket / (4.0 * (n * n - c * c))


def bell_max_numeric(n: float, c: float, tol: float = Config.GOLDEN_TOL) -> Tuple[float, float]:
    """Golden-section maximization of the Bell function over I in [0, 10 (n^2 - c^2)]"""
    _check_maximizable(n, c)
    upper = Config.GOLDEN_BRACKET_SCALE * (n * n - c * c)
    return golden_section_maximize(lambda x: bell_function(x, n, c), 0.0, upper, tol)


def _correlation_bracket(C_ab):
    """1 + (1 + 2C)(1 + C)^(-2(1 + C)/(1 + 2C)); works on scalars and arrays"""
    return 1.0 + (1.0 + 2.0 * C_ab) * np.power(1.0 + C_ab, -2.0 * (1.0 + C_ab) / (1.0 + 2.0 * C_ab))


def bell_max_from_purity(mu_s: float, C_ab: float) -> float:
    """Maximized Bell value in terms of single-mode purity and correlation coefficient"""
    if not (0.0 < mu_s <= 1.0) or not (0.0 <= C_ab < 1.0):
        raise DomainError(f"Need 0 < mu_s <= 1 and 0 <= C_ab < 1, got ({mu_s}, {C_ab})")
    if mu_s * mu_s > (1.0 - C_ab * C_ab) * (1.0 + Config.TOLERANCE):
        raise UnphysicalPointError(f"mu_s^2 = {mu_s * mu_s:.6g} exceeds 1 - C_ab^2 = {1.0 - C_ab * C_ab:.6g}")

    return float(mu_s * mu_s / (1.0 - C_ab * C_ab) * _correlation_bracket(C_ab))


def region_boundaries(C_ab: float) -> Tuple[float, float, float]:
    """(mu_D, mu_B, mu_P): separability, Bell and physicality boundaries"""
    if not (0.0 <= C_ab < 1.0):
        raise DomainError(f"Need 0 <= C_ab < 1, got {C_ab}")

    mu_d = 1.0 - C_ab
    mu_b = math.sqrt(2.0 * (1.0 - C_ab * C_ab) / float(_correlation_bracket(C_ab)))
    mu_p = math.sqrt(1.0 - C_ab * C_ab)
    return mu_d, mu_b, mu_p


def _assign_region(mu_s, mu_d, mu_b, mu_p, tol):
    """Boundary points go to the lower region; vectorized"""
    return np.where(
        mu_s <= mu_d, Region.I.value,
        np.where(
            mu_s <= mu_b, Region.II.value,
            np.where(mu_s <= mu_p * (1.0 + tol), Region.III.value, Region.UNPHYSICAL.value)
        )
    )


def classify_region(mu_s: float, C_ab: float, tol: float = None) -> RegionVerdict:
    """Region I (separable), II (entangled, local) or III (Bell non-local)"""
    tol = Config.TOLERANCE if tol is None else tol
    if mu_s <= 0.0:
        raise DomainError(f"Need mu_s > 0, got {mu_s}")

    boundaries = region_boundaries(C_ab)
    label = str(_assign_region(mu_s, *boundaries, tol))
    return RegionVerdict(mu_s=mu_s, C_ab=C_ab, region=Region(label), boundaries=boundaries)


def region_grid(resolution: int, tol: float = None) -> pd.DataFrame:
    """Region table over mu_s in (0, 1] (outer) and C_ab in [0, 1) (inner)"""
    tol = Config.TOLERANCE if tol is None else tol
    if int(resolution) != resolution or resolution < 2:
        raise DomainError(f"Grid resolution must be an integer >= 2, got {resolution}")
    resolution = int(resolution)

    mu_axis = np.arange(1, resolution + 1) / resolution
    c_axis = np.arange(resolution) / resolution
    mu_s, C_ab = np.meshgrid(mu_axis, c_axis, indexing="ij")
    mu_s = mu_s.ravel()
    C_ab = C_ab.ravel()

    mu_d = 1.0 - C_ab
    mu_p = np.sqrt(1.0 - C_ab ** 2)
    bracket = _correlation_bracket(C_ab)
    mu_b = np.sqrt(2.0 * (1.0 - C_ab ** 2) / bracket)

    regions = _assign_region(mu_s, mu_d, mu_b, mu_p, tol)
    physical = regions != Region.UNPHYSICAL.value
    b_max = np.where(physical, mu_s ** 2 / (1.0 - C_ab ** 2) * bracket, np.nan)

    logger.info(f"Region grid {resolution}x{resolution}: "
                f"{dict(zip(*np.unique(regions, return_counts=True)))}")

    return pd.DataFrame({
        "mu_s": mu_s,
        "C_ab": C_ab,
        "B_max": b_max,
        "region": regions
    }, columns=Config.REGION_COLUMNS)
