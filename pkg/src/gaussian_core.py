"""Covariance-matrix data model for two-mode Gaussian states, quadratures (X_a, Y_a, X_b, Y_b)."""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from config import Config
from src.exceptions import (
    MalformedMatrixError, DomainError, UnphysicalStateError,
    InconsistentInvariantsError, UnsupportedShapeError
)
from src.utils import setup_logging

logger = setup_logging()

# Two-mode symplectic metric
OMEGA = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))

# Partial transposition flips the sign of Y_b
PARTIAL_TRANSPOSE = np.diag([1.0, 1.0, 1.0, -1.0])


@dataclass(frozen=True)
class StandardForm:
    """Standard-form parameters (n, m, c1, c2)"""
    n: float
    m: float
    c1: float
    c2: float

    def __post_init__(self):
        for name in ("n", "m", "c1", "c2"):
            value = getattr(self, name)
            if not isinstance(value, (int, float, np.floating)) or not math.isfinite(value):
                raise DomainError(f"Standard-form parameter {name} must be a finite real, got {value!r}")
            object.__setattr__(self, name, float(value))

    def to_covariance_matrix(self) -> "CovarianceMatrix":
        return to_covariance_matrix(self)

    def as_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "c1": self.c1, "c2": self.c2}


class CovarianceMatrix:
    """Immutable 4x4 symmetric covariance matrix"""

    __slots__ = ("_entries",)

    def __init__(self, entries):
        try:
            array = np.array(entries, dtype=float)
        except (TypeError, ValueError) as e:
            raise MalformedMatrixError(f"Covariance matrix entries are not numeric: {e}")

        if array.shape != (4, 4):
            raise MalformedMatrixError(f"Covariance matrix must be 4x4, got shape {array.shape}")
        if not np.all(np.isfinite(array)):
            raise MalformedMatrixError("Covariance matrix has non-finite entries")
        if not np.array_equal(array, array.T):
            raise MalformedMatrixError("Covariance matrix is not symmetric")

        array.setflags(write=False)
        object.__setattr__(self, "_entries", array)

    def __setattr__(self, name, value):
        raise AttributeError("CovarianceMatrix is immutable")

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def alpha(self) -> np.ndarray:
        """Mode-a self-correlation block"""
        return self._entries[:2, :2]

    @property
    def beta(self) -> np.ndarray:
        """Mode-b self-correlation block"""
        return self._entries[2:, 2:]

    @property
    def gamma(self) -> np.ndarray:
        """Cross-correlation block"""
        return self._entries[:2, 2:]

    def to_list(self) -> list:
        return self._entries.tolist()

    def __eq__(self, other) -> bool:
        if not isinstance(other, CovarianceMatrix):
            return NotImplemented
        return np.array_equal(self._entries, other._entries)

    def __hash__(self) -> int:
        return hash(self._entries.tobytes())

    def __repr__(self) -> str:
        return f"CovarianceMatrix({self._entries.tolist()!r})"


@dataclass(frozen=True)
class SymplecticInvariants:
    I1: float
    I2: float
    I3: float
    I4: float
    delta: float
    d_minus: float
    d_plus: float

    def as_dict(self) -> dict:
        return {
            "I1": self.I1, "I2": self.I2, "I3": self.I3, "I4": self.I4,
            "delta": self.delta, "d_minus": self.d_minus, "d_plus": self.d_plus
        }


@dataclass(frozen=True)
class PhysicalityReport:
    """Physicality verdict plus both sides of the invariant inequality"""
    physical: bool
    positive_definite: bool
    d_minus: float
    invariant_lhs: float   # I1 + I2 + 2 I3
    invariant_rhs: float   # 4 I4 + 1/4
    invariant_inequality_holds: bool

    def as_dict(self) -> dict:
        return {
            "physical": self.physical,
            "positive_definite": self.positive_definite,
            "d_minus": self.d_minus,
            "invariant_lhs": self.invariant_lhs,
            "invariant_rhs": self.invariant_rhs,
            "invariant_inequality_holds": self.invariant_inequality_holds
        }


def to_covariance_matrix(sf: StandardForm) -> CovarianceMatrix:
    """Assemble the standard-form covariance matrix"""
    return CovarianceMatrix([
        [sf.n, 0.0, sf.c1, 0.0],
        [0.0, sf.n, 0.0, sf.c2],
        [sf.c1, 0.0, sf.m, 0.0],
        [0.0, sf.c2, 0.0, sf.m]
    ])


def _det2(block: np.ndarray) -> float:
    return float(block[0, 0] * block[1, 1] - block[0, 1] * block[1, 0])


def _is_positive_definite(matrix: np.ndarray) -> bool:
    return bool(np.linalg.eigvalsh(matrix)[0] > 0.0)


def _inverse_sqrt(block: np.ndarray) -> np.ndarray:
    values, vectors = np.linalg.eigh(block)
    return vectors @ np.diag(1.0 / np.sqrt(values)) @ vectors.T


def symplectic_eigenvalues(cm: CovarianceMatrix) -> Tuple[float, float]:
    """Symplectic eigenvalues (d_minus, d_plus); nan when sigma is not positive-definite"""
    sigma = cm.entries
    values, vectors = np.linalg.eigh(sigma)
    if values[0] <= 0.0:
        return math.nan, math.nan

    # sigma^1/2 (i Omega) sigma^1/2 is Hermitian with spectrum {+-d_minus, +-d_plus}
    root = vectors @ np.diag(np.sqrt(values)) @ vectors.T
    spectrum = np.linalg.eigvalsh(root @ (1j * OMEGA) @ root)
    positive = np.sort(np.abs(spectrum))[::2]
    return float(positive[0]), float(positive[1])


def symplectic_invariants(cm: CovarianceMatrix) -> SymplecticInvariants:
    """Local symplectic invariants I1..I4 and the symplectic eigenvalues"""
    if not isinstance(cm, CovarianceMatrix):
        raise MalformedMatrixError(f"Expected a CovarianceMatrix, got {type(cm).__name__}")

    i1 = _det2(cm.alpha)
    i2 = _det2(cm.beta)
    i3 = _det2(cm.gamma)
    i4 = float(np.linalg.det(cm.entries))
    d_minus, d_plus = symplectic_eigenvalues(cm)

    return SymplecticInvariants(
        I1=i1, I2=i2, I3=i3, I4=i4,
        delta=i1 + i2 + 2.0 * i3,
        d_minus=d_minus, d_plus=d_plus
    )


def is_physical(cm: CovarianceMatrix, tol: float = None) -> PhysicalityReport:
    """Uncertainty-principle test: sigma > 0 and d_minus >= 1/2"""
    tol = Config.TOLERANCE if tol is None else tol
    invariants = symplectic_invariants(cm)
    positive_definite = _is_positive_definite(cm.entries)

    bound = Config.VACUUM_VARIANCE
    physical = positive_definite and invariants.d_minus >= bound * (1.0 - tol)

    lhs = invariants.I1 + invariants.I2 + 2.0 * invariants.I3
    rhs = 4.0 * invariants.I4 + 0.25
    # Squared form of the eigenvalue condition; kept for comparison only
    inequality_holds = lhs <= rhs + tol * max(abs(rhs), 1.0)

    if inequality_holds and not physical:
        logger.debug(f"Invariant inequality holds ({lhs:.6g} <= {rhs:.6g}) but d_minus = {invariants.d_minus:.6g}")

    return PhysicalityReport(
        physical=bool(physical),
        positive_definite=positive_definite,
        d_minus=invariants.d_minus,
        invariant_lhs=lhs,
        invariant_rhs=rhs,
        invariant_inequality_holds=bool(inequality_holds)
    )


def purity(cm: CovarianceMatrix, tol: float = None) -> float:
    """Global purity 1 / (4 sqrt(det sigma))"""
    report = is_physical(cm, tol)
    if not report.physical:
        raise UnphysicalStateError(f"Purity undefined for an unphysical state (d_minus = {report.d_minus:.6g})")

    value = 1.0 / (4.0 * math.sqrt(float(np.linalg.det(cm.entries))))
    # det sigma >= 1/16 for physical states; rounding can push a pure state just above 1
    return min(value, 1.0)


def is_pure(cm: CovarianceMatrix, tol: float = None) -> bool:
    tol = Config.TOLERANCE if tol is None else tol
    if not is_physical(cm, tol).physical:
        return False
    return abs(float(np.linalg.det(cm.entries)) - 1.0 / 16.0) <= tol / 16.0


def standard_form(cm: CovarianceMatrix, tol: float = None) -> StandardForm:
    """Recover (n, m, c1, c2) with c1 >= 0 and |c1| >= |c2|"""
    tol = Config.TOLERANCE if tol is None else tol
    invariants = symplectic_invariants(cm)

    if not (_is_positive_definite(cm.alpha) and _is_positive_definite(cm.beta)):
        raise InconsistentInvariantsError(
            f"Local blocks are not positive-definite (I1 = {invariants.I1:.6g}, I2 = {invariants.I2:.6g})"
        )

    n = math.sqrt(invariants.I1)
    m = math.sqrt(invariants.I2)
    nm = n * m

    # Closed form: c1^2 + c2^2 = S and c1^2 c2^2 = I3^2
    s = (nm * nm + invariants.I3 ** 2 - invariants.I4) / nm
    discriminant = s * s - 4.0 * invariants.I3 ** 2
    scale = max(s * s, nm * nm)
    if s < -tol * nm or discriminant < -tol * scale:
        raise InconsistentInvariantsError(
            f"No real cross correlations for invariants I3 = {invariants.I3:.6g}, I4 = {invariants.I4:.6g}"
        )

    # Singular values of the locally normalized cross block: same roots, well conditioned
    normalized = math.sqrt(nm) * _inverse_sqrt(cm.alpha) @ cm.gamma @ _inverse_sqrt(cm.beta)
    singular = np.linalg.svd(normalized, compute_uv=False)
    c1 = float(singular[0])
    c2 = float(singular[1]) if invariants.I3 > 0.0 else -float(singular[1])

    recovered = (nm - c1 * c1) * (nm - c2 * c2)
    if abs(recovered - invariants.I4) > max(tol, 1e-12) * max(abs(invariants.I4), nm * nm):
        raise InconsistentInvariantsError(
            f"Standard form does not reproduce I4: {recovered:.12g} vs {invariants.I4:.12g}"
        )

    return StandardForm(n=n, m=m, c1=c1, c2=c2)


def symmetric_state(n: float, c: float) -> StandardForm:
    """Symmetric OPO-family form (n, n, c, -c)"""
    return StandardForm(n=n, m=n, c1=c, c2=-c)


def pure_symmetric_state(n: float) -> StandardForm:
    """Pure symmetric state, c = sqrt(n^2 - 1/4)"""
    if not math.isfinite(n) or n < Config.VACUUM_VARIANCE:
        raise DomainError(f"Pure symmetric state needs n >= 1/2, got {n}")
    c = math.sqrt(n * n - 0.25)
    return symmetric_state(n, c)


def is_symmetric_family(sf: StandardForm, tol: float = None) -> bool:
    tol = Config.TOLERANCE if tol is None else tol
    scale = max(sf.n, sf.m, abs(sf.c1), abs(sf.c2))
    return abs(sf.n - sf.m) <= tol * scale and abs(sf.c1 + sf.c2) <= tol * scale


def _require_symmetric(sf: StandardForm):
    if not is_symmetric_family(sf):
        raise UnsupportedShapeError(
            f"Defined on the symmetric family only (n = m, c1 = -c2), got {sf.as_dict()}"
        )


def single_mode_purity(sf: StandardForm) -> float:
    """mu_s = 1 / (2n)"""
    _require_symmetric(sf)
    return 1.0 / (2.0 * sf.n)


def correlation_coefficient(sf: StandardForm) -> float:
    """C_ab = c1 / n"""
    _require_symmetric(sf)
    return sf.c1 / sf.n


def rotation(theta: float) -> np.ndarray:
    """Single-mode phase rotation"""
    return np.array([
        [math.cos(theta), math.sin(theta)],
        [-math.sin(theta), math.cos(theta)]
    ])


def single_mode_squeezer(r: float) -> np.ndarray:
    return np.diag([math.exp(-r), math.exp(r)])


def apply_local_symplectic(cm: CovarianceMatrix, s_a: np.ndarray, s_b: np.ndarray) -> CovarianceMatrix:
    """sigma -> (S_a + S_b) sigma (S_a + S_b)^T for local symplectics S_a, S_b"""
    for label, block in (("S_a", s_a), ("S_b", s_b)):
        block = np.asarray(block, dtype=float)
        if block.shape != (2, 2) or abs(_det2(block) - 1.0) > 1e-9:
            raise DomainError(f"{label} is not a 2x2 symplectic matrix")

    total = np.zeros((4, 4))
    total[:2, :2] = s_a
    total[2:, 2:] = s_b
    transformed = total @ cm.entries @ total.T
    return CovarianceMatrix(0.5 * (transformed + transformed.T))


def partial_transpose_symplectic_eigenvalue(cm: CovarianceMatrix) -> float:
    """Smallest symplectic eigenvalue of the partially transposed state"""
    transposed = PARTIAL_TRANSPOSE @ cm.entries @ PARTIAL_TRANSPOSE
    d_minus, _ = symplectic_eigenvalues(CovarianceMatrix(transposed))
    return d_minus
