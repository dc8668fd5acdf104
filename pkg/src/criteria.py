import math
from dataclasses import dataclass
from enum import Enum
from typing import List

from src.gaussian_core import StandardForm, CovarianceMatrix, symplectic_invariants
from src.utils import setup_logging

logger = setup_logging()


class Verdict(str, Enum):
    SEPARABLE_CONSISTENT = "separable-consistent"
    ENTANGLED = "entangled"
    EPR_STEERABLE = "epr-steerable"
    INCONCLUSIVE = "inconclusive"


class Direction(str, Enum):
    A_INFERS_B = "A-infers-B"
    B_INFERS_A = "B-infers-A"


PHS_THRESHOLD = 0.25
DUAN_THRESHOLD = 0.0
REID_THRESHOLD = 0.25


@dataclass(frozen=True)
class CriterionReport:
    name: str
    witness: float
    threshold: float
    verdict: Verdict

    @property
    def fires(self) -> bool:
        """True when the criterion certifies entanglement or steering"""
        return self.verdict in (Verdict.ENTANGLED, Verdict.EPR_STEERABLE)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "witness": self.witness,
            "threshold": self.threshold,
            "verdict": self.verdict.value
        }


@dataclass(frozen=True)
class ClassificationReport:
    reports: List[CriterionReport]
    hierarchy_consistent: bool
    one_way_steering: bool

    def as_dict(self) -> dict:
        return {
            "criteria": [report.as_dict() for report in self.reports],
            "hierarchy_consistent": self.hierarchy_consistent,
            "one_way_steering": self.one_way_steering
        }


def phs_witness(n: float, m: float, c1: float, c2: float) -> float:
    return n * n + m * m + 2.0 * abs(c1 * c2) - 4.0 * (n * m - c1 * c1) * (n * m - c2 * c2)


def phs_check(sf: StandardForm) -> CriterionReport:
    """Separable iff the witness is <= 1/4 (necessary and sufficient)"""
    witness = phs_witness(sf.n, sf.m, sf.c1, sf.c2)
    verdict = Verdict.ENTANGLED if witness > PHS_THRESHOLD else Verdict.SEPARABLE_CONSISTENT
    return CriterionReport("PHS", witness, PHS_THRESHOLD, verdict)


def phs_check_cm(cm: CovarianceMatrix) -> CriterionReport:
    """PHS witness from the invariants of an arbitrary covariance matrix"""
    inv = symplectic_invariants(cm)
    witness = inv.I1 + inv.I2 + 2.0 * abs(inv.I3) - 4.0 * inv.I4
    verdict = Verdict.ENTANGLED if witness > PHS_THRESHOLD else Verdict.SEPARABLE_CONSISTENT
    return CriterionReport("PHS", witness, PHS_THRESHOLD, verdict)


def duan_check(sf: StandardForm) -> CriterionReport:
    """Entangled iff sqrt((2n-1)(2m-1)) - (c1 - c2) < 0"""
    product = (2.0 * sf.n - 1.0) * (2.0 * sf.m - 1.0)
    if product < 0.0:
        # only reachable for unphysical (e.g. estimated) states
        logger.warning(f"Duan: (2n-1)(2m-1) = {product:.6g} < 0, clamped to 0")
        product = 0.0

    witness = math.sqrt(product) - (sf.c1 - sf.c2)
    verdict = Verdict.ENTANGLED if witness < DUAN_THRESHOLD else Verdict.INCONCLUSIVE
    return CriterionReport("Duan", witness, DUAN_THRESHOLD, verdict)


def reid_check(sf: StandardForm, direction: Direction = Direction.A_INFERS_B) -> CriterionReport:
    """EPR steering iff the inferred-variance product is < 1/4"""
    direction = Direction(direction)
    nm = sf.n * sf.m
    leading = sf.n * sf.n if direction == Direction.A_INFERS_B else sf.m * sf.m
    witness = leading * (1.0 - sf.c1 * sf.c1 / nm) * (1.0 - sf.c2 * sf.c2 / nm)
    verdict = Verdict.EPR_STEERABLE if witness < REID_THRESHOLD else Verdict.INCONCLUSIVE

    name = "Reid-AB" if direction == Direction.A_INFERS_B else "Reid-BA"
    return CriterionReport(name, witness, REID_THRESHOLD, verdict)


def classify(sf: StandardForm) -> ClassificationReport:
    """PHS, Duan and both Reid directions, in that order"""
    phs = phs_check(sf)
    duan = duan_check(sf)
    reid_ab = reid_check(sf, Direction.A_INFERS_B)
    reid_ba = reid_check(sf, Direction.B_INFERS_A)

    steerable = reid_ab.fires or reid_ba.fires
    hierarchy_consistent = (not steerable) or phs.fires
    if not hierarchy_consistent:
        logger.warning(f"Criteria hierarchy broken for {sf.as_dict()}: Reid steerable but PHS separable")

    return ClassificationReport(
        reports=[phs, duan, reid_ab, reid_ba],
        hierarchy_consistent=hierarchy_consistent,
        one_way_steering=reid_ab.fires != reid_ba.fires
    )
