# src/wigner_oracle.py - Wigner function and parity Bell combination from a full CM

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from config import Config
from src.exceptions import DomainError, SingularStateError
from src.gaussian_core import CovarianceMatrix, is_physical
from src.optimize import golden_section_maximize
from src.utils import setup_logging

logger = setup_logging()


@dataclass(frozen=True)
class PhasePoint:
    alpha_a: complex
    alpha_b: complex

    @property
    def quadratures(self) -> np.ndarray:
        """K = sqrt(2) (Re a, Im a, Re b, Im b)"""
        return math.sqrt(2.0) * np.array([
            self.alpha_a.real, self.alpha_a.imag,
            self.alpha_b.real, self.alpha_b.imag
        ])


ORIGIN = PhasePoint(0j, 0j)


def _checked_sigma(cm: CovarianceMatrix) -> Tuple[np.ndarray, float]:
    sigma = cm.entries
    if np.linalg.eigvalsh(sigma)[0] <= 0.0:
        raise SingularStateError("Covariance matrix is not positive-definite")

    det = float(np.linalg.det(sigma))
    if det < Config.SINGULAR_DET:
        raise SingularStateError(f"det(sigma) = {det:.3g} is numerically singular")
    return sigma, det


def _quadratic_form(sigma: np.ndarray, k: np.ndarray) -> float:
    # pivoted solve instead of an explicit inverse
    return float(k @ np.linalg.solve(sigma, k))


def wigner(cm: CovarianceMatrix, p: PhasePoint) -> float:
    """Normalized two-mode Wigner function"""
    sigma, det = _checked_sigma(cm)
    k = p.quadratures
    return math.exp(-0.5 * _quadratic_form(sigma, k)) / ((2.0 * math.pi) ** 2 * math.sqrt(det))


def parity_expectation(cm: CovarianceMatrix, p: PhasePoint) -> float:
    """Displaced-parity expectation; 1/(4 sqrt(det sigma)) at the origin"""
    sigma, det = _checked_sigma(cm)
    k = p.quadratures
    return math.exp(-0.5 * _quadratic_form(sigma, k)) / (4.0 * math.sqrt(det))


def bell_points(intensity: float):
    """The four measurement settings with their CHSH signs"""
    root = math.sqrt(intensity)
    return [
        (+1.0, PhasePoint(0j, 0j)),
        (+1.0, PhasePoint(complex(root), 0j)),
        (+1.0, PhasePoint(0j, complex(-root))),
        (-1.0, PhasePoint(complex(root), complex(-root)))
    ]


def bell_combination(cm: CovarianceMatrix, intensity: float) -> float:
    """<W(0,0)> + <W(r,0)> + <W(0,-r)> - <W(r,-r)>, r = sqrt(I)"""
    if intensity < 0.0:
        raise DomainError(f"Displacement intensity must be >= 0, got {intensity}")
    return sum(sign * parity_expectation(cm, point) for sign, point in bell_points(intensity))


def bracket_upper(cm: CovarianceMatrix) -> float:
    """10 sqrt(det sigma_X), sigma_X the (X_a, X_b) sub-block"""
    sigma = cm.entries
    det_x = sigma[0, 0] * sigma[2, 2] - sigma[0, 2] ** 2
    if det_x <= 0.0:
        raise SingularStateError("Position-quadrature block is singular")
    return Config.GOLDEN_BRACKET_SCALE * math.sqrt(det_x)


def bell_max_numeric(cm: CovarianceMatrix, tol: float = Config.GOLDEN_TOL) -> Tuple[float, float]:
    """(I*, B*) maximizing the Bell combination by golden-section search"""
    _checked_sigma(cm)
    if not is_physical(cm).physical:
        logger.warning("Maximizing the Bell combination of an unphysical covariance matrix")

    return golden_section_maximize(lambda x: bell_combination(cm, x), 0.0, bracket_upper(cm), tol)
