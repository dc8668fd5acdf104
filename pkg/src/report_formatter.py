# src/report_formatter.py - analysis reports and tabular output

import io
import sys
from pathlib import Path
from typing import Dict, Any, Optional

import pandas as pd

from config import Config
from src.bell import bell_max, bell_max_numeric, optimal_displacement, classify_region
from src.criteria import classify
from src.exceptions import CVBellError
from src.gaussian_core import (
    CovarianceMatrix, StandardForm, symplectic_invariants, is_physical, purity, standard_form,
    is_symmetric_family, single_mode_purity, correlation_coefficient
)
from src import wigner_oracle
from src.utils import setup_logging, to_json

logger = setup_logging()


class ReportFormatter:
    """Build report dictionaries and render them as JSON or CSV"""

    def __init__(self, tolerance: float = None):
        self.tolerance = Config.TOLERANCE if tolerance is None else tolerance

    def format_analysis(self, cm: CovarianceMatrix) -> Dict[str, Any]:
        """Invariants, physicality, purity, standard form, criteria and region of one state"""
        physicality = is_physical(cm, self.tolerance)
        report = {
            "covariance_matrix": cm.to_list(),
            "invariants": symplectic_invariants(cm).as_dict(),
            "physicality": physicality.as_dict(),
            "purity": purity(cm, self.tolerance) if physicality.physical else None,
            "standard_form": None,
            "criteria": None,
            "region": None
        }

        try:
            sf = standard_form(cm, self.tolerance)
        except CVBellError as e:
            logger.warning(f"No standard form: {e}")
            report["standard_form_error"] = str(e)
            return report

        report["standard_form"] = sf.as_dict()
        report["criteria"] = classify(sf).as_dict()
        report["region"] = self._region(sf)
        return report

    def _region(self, sf: StandardForm) -> Optional[Dict[str, Any]]:
        if not is_symmetric_family(sf, self.tolerance):
            logger.info("State is not in the symmetric family; region verdict skipped")
            return None
        mu_s = single_mode_purity(sf)
        C_ab = abs(correlation_coefficient(sf))
        if C_ab >= 1.0:
            return None
        return classify_region(mu_s, C_ab, self.tolerance).as_dict()

    def format_bell(self, cm: CovarianceMatrix) -> Dict[str, Any]:
        """Closed-form Bell maximum for symmetric states, oracle maximum for any state"""
        intensity, value = wigner_oracle.bell_max_numeric(cm)
        report = {
            "oracle": {"displacement_intensity": intensity, "value": value},
            "closed_form": None,
            "violates": value > Config.LOCAL_BOUND
        }

        sf = standard_form(cm, self.tolerance)
        report["standard_form"] = sf.as_dict()
        if is_symmetric_family(sf, self.tolerance):
            n, c = sf.n, abs(sf.c1)
            numeric_intensity, numeric_value = bell_max_numeric(n, c)
            analytic = bell_max(n, c)
            report["closed_form"] = {
                "n": n,
                "c": c,
                "displacement_intensity": optimal_displacement(n, c),
                "value": analytic,
                "numeric_displacement_intensity": numeric_intensity,
                "numeric_value": numeric_value
            }
            report["violates"] = analytic > Config.LOCAL_BOUND
        return report

    @staticmethod
    def render_json(data: Dict[str, Any]) -> str:
        return to_json(data) + "\n"

    @staticmethod
    def render_csv(frame: pd.DataFrame) -> str:
        buffer = io.StringIO()
        frame.to_csv(buffer, index=False, float_format=Config.FLOAT_FORMAT, na_rep="nan", lineterminator="\n")
        return buffer.getvalue()

    @staticmethod
    def emit(text: str, out: Optional[str] = None):
        """Write to the output file, or stdout when none is given"""
        if out is None:
            sys.stdout.write(text)
            return
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {path}")
