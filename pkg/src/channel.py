# src/channel.py - loss channel on the symmetric family

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import pandas as pd

from config import Config
from src.bell import bell_max, classify_region, Region
from src.criteria import phs_check, duan_check, reid_check, Direction
from src.exceptions import DomainError, PreconditionError, UnsupportedShapeError
from src.gaussian_core import (
    StandardForm, symmetric_state, is_symmetric_family, is_pure, purity,
    single_mode_purity, correlation_coefficient
)
from src.optimize import find_bracket_downward, sign_changes, bisect_root
from src.utils import setup_logging

logger = setup_logging()


@dataclass(frozen=True)
class ChannelSweepRow:
    T: float
    n_T: float
    c_T: float
    mu_s: float
    C_ab: float
    purity: float
    phs_witness: float
    duan_witness: float
    reid_witness: float
    bell_max: float
    region: Region

    def as_record(self) -> dict:
        return {
            "T": self.T, "n_T": self.n_T, "c_T": self.c_T,
            "mu_s": self.mu_s, "C_ab": self.C_ab, "purity": self.purity,
            "phs": self.phs_witness, "duan": self.duan_witness, "reid": self.reid_witness,
            "bell_max": self.bell_max, "region": self.region.value
        }


def _require_symmetric(sf: StandardForm):
    if not is_symmetric_family(sf):
        raise UnsupportedShapeError(f"Loss channel is defined on the symmetric family, got {sf.as_dict()}")


def _require_pure(sf: StandardForm, tol: float = None):
    _require_symmetric(sf)
    if not is_pure(sf.to_covariance_matrix(), tol):
        raise PreconditionError(f"Ancestor state must be pure, got {sf.as_dict()}")


def apply_loss(sf: StandardForm, T: float) -> StandardForm:
    """Evolve (n, n, c, -c) through a beam splitter of transmittivity T"""
    _require_symmetric(sf)
    if not math.isfinite(T) or not (0.0 <= T <= 1.0):
        raise DomainError(f"Transmittivity must lie in [0, 1], got {T}")

    n_t = (1.0 - T) / 2.0 + T * sf.n
    c_t = T * sf.c1
    return symmetric_state(n_t, c_t)


def sweep_row(sf0: StandardForm, T: float) -> ChannelSweepRow:
    evolved = apply_loss(sf0, T)
    c_t = abs(evolved.c1)
    mu_s = single_mode_purity(evolved)
    C_ab = abs(correlation_coefficient(evolved))

    return ChannelSweepRow(
        T=T,
        n_T=evolved.n,
        c_T=evolved.c1,
        mu_s=mu_s,
        C_ab=C_ab,
        purity=purity(evolved.to_covariance_matrix()),
        phs_witness=phs_check(evolved).witness,
        duan_witness=duan_check(evolved).witness,
        reid_witness=reid_check(evolved, Direction.A_INFERS_B).witness,
        bell_max=bell_max(evolved.n, c_t),
        region=classify_region(mu_s, C_ab).region
    )


def sweep(sf0: StandardForm, T_grid: Sequence[float], tol: float = None) -> List[ChannelSweepRow]:
    """One row per transmittivity, ordered by T"""
    _require_pure(sf0, tol)
    grid = sorted(float(T) for T in T_grid)
    for T in grid:
        if not (0.0 < T <= 1.0):
            raise DomainError(f"Sweep transmittivities must lie in (0, 1], got {T}")

    logger.info(f"Sweeping {len(grid)} transmittivities for ancestor n = {sf0.n:.6g}")
    return [sweep_row(sf0, T) for T in grid]


def sweep_frame(rows: List[ChannelSweepRow]) -> pd.DataFrame:
    return pd.DataFrame([row.as_record() for row in rows], columns=Config.SWEEP_COLUMNS)


def _bell_excess(sf0: StandardForm):
    def excess(T: float) -> float:
        evolved = apply_loss(sf0, T)
        return bell_max(evolved.n, abs(evolved.c1)) - Config.LOCAL_BOUND
    return excess


def bell_threshold(sf0: StandardForm, tol: float = None) -> Optional[float]:
    """Smallest T keeping the Bell violation, or None if the ancestor never violates"""
    _require_pure(sf0, tol)
    excess = _bell_excess(sf0)

    if excess(1.0) <= 0.0:
        logger.info(f"Ancestor n = {sf0.n:.6g} does not violate the local bound")
        return None

    t_lo = find_bracket_downward(excess, 1.0, Config.THRESHOLD_STEP)

    # single crossing is expected but not proven
    crossings = sign_changes(excess, t_lo, 1.0, Config.MONOTONICITY_SCAN)
    if crossings != 1:
        logger.warning(f"Bell excess changes sign {crossings} times on [{t_lo}, 1]; bisecting anyway")

    threshold = bisect_root(excess, t_lo, 1.0)
    logger.info(f"Bell threshold for ancestor n = {sf0.n:.6g}: T = {threshold:.9f}")
    return threshold


def duan_threshold(sf0: StandardForm, tol: float = None) -> Optional[float]:
    """Transmittivity at which the Duan witness changes sign; None when it never does"""
    _require_pure(sf0, tol)

    # the symmetric Duan witness is T times its T = 1 value, so its sign never flips on (0, 1]
    witness_at_one = duan_check(apply_loss(sf0, 1.0)).witness
    witness_small = duan_check(apply_loss(sf0, Config.THRESHOLD_STEP)).witness
    if (witness_at_one < 0.0) != (witness_small < 0.0):
        logger.warning("Duan witness changed sign inside (0, 1]; bisecting")
        return bisect_root(lambda T: duan_check(apply_loss(sf0, T)).witness, Config.THRESHOLD_STEP, 1.0)
    return None
