"""
Synthetic single-homodyne data and covariance-matrix reconstruction.

A measurement setting picks a quadrature combination w (a 4-vector over
X_a, Y_a, X_b, Y_b) whose outcome is zero-mean Gaussian with variance
w^T sigma w. Each setting draws from its own Philox stream keyed by
(seed, setting index), so results do not depend on evaluation order.
The covariance matrix is recovered by weighted least squares on the linear map
from the ten independent entries to the setting variances.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from config import Config
from src.bell import bell_max
from src.channel import apply_loss
from src.criteria import classify, CriterionReport
from src.exceptions import CVBellError, DomainError, UnphysicalStateError, UnderdeterminedError
from src.gaussian_core import (
    CovarianceMatrix, StandardForm, is_physical, standard_form, is_symmetric_family,
    partial_transpose_symplectic_eigenvalue
)
from src.wigner_oracle import bell_max_numeric
from src.utils import setup_logging

logger = setup_logging()

MODES = ("a", "b", "plus", "minus")

# (h, k) pairs of the ten independent entries, row-major upper triangle
UNIQUE_ENTRIES = [(h, k) for h in range(4) for k in range(h, 4)]


@dataclass(frozen=True)
class Setting:
    """Homodyne setting: selector, local-oscillator phase and mode-b offset (plus/minus only)"""
    mode: str
    theta: float
    offset: float = 0.0

    def __post_init__(self):
        if self.mode not in MODES:
            raise DomainError(f"Unknown mode selector {self.mode!r}; expected one of {MODES}")
        if not (0.0 <= self.theta < math.pi):
            raise DomainError(f"Setting phase must lie in [0, pi), got {self.theta}")

    @property
    def weights(self) -> np.ndarray:
        ca, sa = math.cos(self.theta), math.sin(self.theta)
        cb, sb = math.cos(self.theta + self.offset), math.sin(self.theta + self.offset)
        if self.mode == "a":
            return np.array([ca, sa, 0.0, 0.0])
        if self.mode == "b":
            return np.array([0.0, 0.0, ca, sa])
        sign = 1.0 if self.mode == "plus" else -1.0
        return np.array([ca, sa, sign * cb, sign * sb]) / math.sqrt(2.0)

    def variance(self, cm: CovarianceMatrix) -> float:
        w = self.weights
        return float(w @ cm.entries @ w)

    def label(self) -> str:
        return f"{self.mode}@{self.theta:.6f}+{self.offset:.6f}"


def default_settings() -> Tuple[Setting, ...]:
    """Local settings on a and b, balanced combinations at common phase, plus a pi/2 relative phase"""
    settings = [Setting(mode, theta) for mode in MODES for theta in Config.SETTING_PHASES]
    # common-phase combinations only fix sigma(X_a,Y_b) + sigma(Y_a,X_b)
    settings += [Setting(mode, 0.0, math.pi / 2) for mode in ("plus", "minus")]
    return tuple(settings)


DEFAULT_SETTINGS = default_settings()


@dataclass(frozen=True)
class QuadratureDataset:
    settings: Tuple[Setting, ...]
    samples: Tuple[np.ndarray, ...]
    sample_count: int
    seed: int

    def variances(self) -> np.ndarray:
        return np.array([np.var(s, ddof=1) for s in self.samples])


@dataclass(frozen=True)
class CMEstimate:
    cm: CovarianceMatrix
    standard_errors: np.ndarray
    physical: bool
    sample_count: Optional[int]

    def as_dict(self) -> dict:
        return {
            "covariance_matrix": self.cm.to_list(),
            "standard_errors": self.standard_errors.tolist(),
            "physical": self.physical,
            "sample_count": self.sample_count
        }


def _stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(index)])))


def sample_quadratures(cm: CovarianceMatrix, settings: Sequence[Setting] = None,
                       N: int = Config.DEFAULT_SAMPLES, seed: int = Config.DEFAULT_SEED) -> QuadratureDataset:
    """Draw N homodyne outcomes per setting from the zero-mean state cm"""
    settings = tuple(DEFAULT_SETTINGS if settings is None else settings)
    if int(N) != N or N < 2:
        raise DomainError(f"Need at least 2 samples per setting, got {N}")
    report = is_physical(cm)
    if not report.physical:
        raise UnphysicalStateError(f"Cannot sample an unphysical state (d_minus = {report.d_minus:.6g})")

    samples = []
    for index, setting in enumerate(settings):
        draws = _stream(seed, index).normal(0.0, math.sqrt(setting.variance(cm)), int(N))
        draws.setflags(write=False)
        samples.append(draws)

    logger.info(f"Sampled {len(settings)} settings x {int(N)} outcomes (seed {seed})")
    return QuadratureDataset(settings=settings, samples=tuple(samples), sample_count=int(N), seed=int(seed))


def design_matrix(settings: Sequence[Setting]) -> np.ndarray:
    """Row s maps the ten independent entries to the variance of setting s"""
    rows = []
    for setting in settings:
        w = setting.weights
        rows.append([w[h] * w[k] * (1.0 if h == k else 2.0) for h, k in UNIQUE_ENTRIES])
    return np.array(rows)


def _to_symmetric(values: np.ndarray) -> np.ndarray:
    matrix = np.zeros((4, 4))
    for value, (h, k) in zip(values, UNIQUE_ENTRIES):
        matrix[h, k] = value
        matrix[k, h] = value
    return matrix


def estimate_cm_from_variances(settings: Sequence[Setting], variances: Sequence[float],
                               sample_count: Optional[int] = None) -> CMEstimate:
    """Least-squares covariance matrix from per-setting variances; sample_count None means exact"""
    design = design_matrix(settings)
    rank = np.linalg.matrix_rank(design)
    if rank < len(UNIQUE_ENTRIES):
        raise UnderdeterminedError(f"Settings determine only {rank} of {len(UNIQUE_ENTRIES)} covariance entries")

    variances = np.asarray(variances, dtype=float)
    if variances.shape != (len(settings),) or not np.all(variances > 0.0):
        raise DomainError(f"Need one positive variance per setting, got {variances.tolist()}")

    # a sample variance has standard deviation proportional to itself: weight rows by 1/v
    pseudo_inverse = np.linalg.pinv(design / variances[:, None])
    entries = pseudo_inverse @ np.ones(len(settings))

    if sample_count is None:
        errors = np.zeros(len(UNIQUE_ENTRIES))
    else:
        # weighted rows all carry the asymptotic variance 2/(N - 1)
        covariance = 2.0 / (sample_count - 1) * pseudo_inverse @ pseudo_inverse.T
        errors = np.sqrt(np.clip(np.diag(covariance), 0.0, None))

    cm = CovarianceMatrix(_to_symmetric(entries))
    physical = is_physical(cm).physical
    if not physical:
        logger.warning("Estimated covariance matrix is not physical; reporting it unprojected")

    return CMEstimate(cm=cm, standard_errors=_to_symmetric(errors), physical=physical, sample_count=sample_count)


def estimate_cm(ds: QuadratureDataset) -> CMEstimate:
    return estimate_cm_from_variances(ds.settings, ds.variances(), ds.sample_count)


def export_dataset(ds: QuadratureDataset) -> pd.DataFrame:
    """Long table: one row per outcome"""
    frames = []
    for index, (setting, samples) in enumerate(zip(ds.settings, ds.samples)):
        frames.append(pd.DataFrame({
            "setting": index,
            "mode": setting.mode,
            "theta": setting.theta,
            "offset": setting.offset,
            "sample": samples
        }))
    return pd.concat(frames, ignore_index=True)[Config.DATASET_COLUMNS]


@dataclass(frozen=True)
class EstimatedCriterion:
    name: str
    witness: float
    threshold: float
    verdict: str
    stderr: float
    significant: bool

    def as_dict(self) -> dict:
        return {
            "name": self.name, "witness": self.witness, "threshold": self.threshold,
            "verdict": self.verdict, "stderr": self.stderr, "significant": self.significant
        }


@dataclass
class EndToEndReport:
    sample_count: int
    seed: int
    replicates: int
    true_state: Dict
    estimate: CMEstimate
    estimated_form: StandardForm
    criteria: List[EstimatedCriterion]
    bell_max: float
    bell_max_stderr: float
    bell_max_symmetrized: Optional[float]
    verdicts_agree: bool = field(default=False)

    def as_dict(self) -> dict:
        return {
            "sample_count": self.sample_count,
            "seed": self.seed,
            "replicates": self.replicates,
            "true": self.true_state,
            "estimate": {
                **self.estimate.as_dict(),
                "standard_form": self.estimated_form.as_dict(),
                "criteria": [criterion.as_dict() for criterion in self.criteria],
                "bell_max": self.bell_max,
                "bell_max_stderr": self.bell_max_stderr,
                "bell_max_symmetrized": self.bell_max_symmetrized
            },
            "verdicts_agree": self.verdicts_agree
        }


def _symmetrized_bell(sf: StandardForm) -> Optional[float]:
    """Bell value of the symmetrized form, None where the estimate leaves the symmetric domain"""
    n_bar = 0.5 * (sf.n + sf.m)
    c_bar = 0.5 * (sf.c1 - sf.c2)
    # near-vacuum estimates routinely land just below 1/2
    if n_bar < Config.VACUUM_VARIANCE or not (0.0 <= c_bar < n_bar):
        return None
    try:
        return bell_max(n_bar, c_bar)
    except CVBellError as e:
        logger.warning(f"No symmetrized Bell value for n = {n_bar:.6g}, c = {c_bar:.6g}: {e}")
        return None


def _evaluate(cm: CovarianceMatrix) -> Dict:
    """Standard form, criteria, PT eigenvalue and Bell values of one (possibly estimated) CM"""
    sf = standard_form(cm)

    return {
        "standard_form": sf,
        "criteria": classify(sf).reports,
        "pt_eigenvalue": partial_transpose_symplectic_eigenvalue(cm),
        "bell_max": bell_max_numeric(cm)[1],
        "bell_max_symmetrized": _symmetrized_bell(sf)
    }


def _true_state_summary(sf_true: StandardForm) -> Dict:
    reports = classify(sf_true).reports
    if is_symmetric_family(sf_true):
        value = bell_max(sf_true.n, abs(sf_true.c1))
    else:
        value = bell_max_numeric(sf_true.to_covariance_matrix())[1]
    return {
        "standard_form": sf_true.as_dict(),
        "criteria": [report.as_dict() for report in reports],
        "bell_max": value
    }


def _significant(report: CriterionReport, stderr: float, pt_eigenvalue: float, pt_stderr: float) -> bool:
    sigmas = Config.SIGNIFICANCE_SIGMAS
    if report.name == "PHS":
        # the PHS witness is second order around 1/4; judge on the PT eigenvalue instead
        return abs(pt_eigenvalue - Config.VACUUM_VARIANCE) > sigmas * pt_stderr
    return abs(report.witness - report.threshold) > sigmas * stderr


def _bootstrap(ds: QuadratureDataset, replicates: int) -> List[Dict]:
    results = []
    for replicate in range(replicates):
        variances = []
        for index, samples in enumerate(ds.samples):
            rng = _stream(ds.seed, (replicate + 1) * len(ds.samples) + index)
            resampled = samples[rng.integers(0, ds.sample_count, ds.sample_count)]
            variances.append(np.var(resampled, ddof=1))
        try:
            estimate = estimate_cm_from_variances(ds.settings, variances, ds.sample_count)
            results.append(_evaluate(estimate.cm))
        except CVBellError as e:
            logger.warning(f"Bootstrap replicate {replicate} skipped: {e}")
    return results


def end_to_end(sf_true: StandardForm, N: int = Config.DEFAULT_SAMPLES, seed: int = Config.DEFAULT_SEED,
               replicates: int = Config.BOOTSTRAP_REPLICATES,
               settings: Sequence[Setting] = None) -> EndToEndReport:
    """Sample, reconstruct and re-run criteria and Bell tests on the estimate"""
    cm_true = sf_true.to_covariance_matrix()
    ds = sample_quadratures(cm_true, settings, N, seed)
    estimate = estimate_cm(ds)
    evaluation = _evaluate(estimate.cm)

    boot = _bootstrap(ds, replicates)
    if len(boot) < 2:
        raise DomainError(f"Only {len(boot)} bootstrap replicates succeeded; need at least 2")

    pt_stderr = float(np.std([b["pt_eigenvalue"] for b in boot], ddof=1))
    criteria = []
    for position, report in enumerate(evaluation["criteria"]):
        stderr = float(np.std([b["criteria"][position].witness for b in boot], ddof=1))
        criteria.append(EstimatedCriterion(
            name=report.name,
            witness=report.witness,
            threshold=report.threshold,
            verdict=report.verdict.value,
            stderr=stderr,
            significant=_significant(report, stderr, evaluation["pt_eigenvalue"], pt_stderr)
        ))

    true_state = _true_state_summary(sf_true)
    true_verdicts = [report["verdict"] for report in true_state["criteria"]]
    verdicts_agree = true_verdicts == [criterion.verdict for criterion in criteria]

    report = EndToEndReport(
        sample_count=int(N),
        seed=int(seed),
        replicates=len(boot),
        true_state=true_state,
        estimate=estimate,
        estimated_form=evaluation["standard_form"],
        criteria=criteria,
        bell_max=evaluation["bell_max"],
        bell_max_stderr=float(np.std([b["bell_max"] for b in boot], ddof=1)),
        bell_max_symmetrized=evaluation["bell_max_symmetrized"],
        verdicts_agree=verdicts_agree
    )
    logger.info(f"End-to-end N = {N}: bell_max {report.bell_max:.6f} +- {report.bell_max_stderr:.2g} "
                f"(true {true_state['bell_max']:.6f}), verdicts agree: {verdicts_agree}")
    return report


def simulated_sweep(sf0: StandardForm, T_grid: Sequence[float], N: int = Config.DEFAULT_SAMPLES,
                    seed: int = Config.DEFAULT_SEED) -> pd.DataFrame:
    """Simulated reconstruction points alongside the theory curve, one row per T"""
    rows = []
    for index, T in enumerate(sorted(float(t) for t in T_grid)):
        evolved = apply_loss(sf0, T)
        point_seed = int(np.random.SeedSequence([int(seed), index]).generate_state(1)[0])
        estimate = estimate_cm(sample_quadratures(evolved.to_covariance_matrix(), None, N, point_seed))
        evaluation = _evaluate(estimate.cm)
        theory = classify(evolved).reports

        rows.append({
            "T": T,
            "bell_theory": bell_max(evolved.n, abs(evolved.c1)),
            "bell_estimate": evaluation["bell_max"],
            "duan_theory": theory[1].witness,
            "duan_estimate": evaluation["criteria"][1].witness,
            "phs_theory": theory[0].witness,
            "phs_estimate": evaluation["criteria"][0].witness,
            "physical": estimate.physical
        })

    logger.info(f"Simulated {len(rows)} reconstruction points with {N} samples per setting")
    return pd.DataFrame(rows)
