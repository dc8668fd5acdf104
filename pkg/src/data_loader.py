# src/data_loader.py - state documents on disk

import json
import os
from pathlib import Path
from typing import Dict, Any, Union

from config import Config
from src.exceptions import CVBellError, MalformedMatrixError
from src.gaussian_core import CovarianceMatrix, StandardForm, symmetric_state
from src.utils import setup_logging, save_json

logger = setup_logging()

STATE_KEYS = ("matrix", "standard_form")


def _standard_form_from_document(params: Any) -> StandardForm:
    if not isinstance(params, dict):
        raise MalformedMatrixError(f"'standard_form' must be an object, got {type(params).__name__}")

    try:
        if set(params) >= {"n", "m", "c1", "c2"}:
            return StandardForm(n=params["n"], m=params["m"], c1=params["c1"], c2=params["c2"])
        if set(params) >= {"n", "c"}:
            # symmetric shorthand (n, n, c, -c)
            return symmetric_state(params["n"], params["c"])
    except CVBellError as e:
        raise MalformedMatrixError(f"Invalid standard-form parameters: {e}")

    raise MalformedMatrixError(f"'standard_form' needs n, m, c1, c2 (or n, c), got keys {sorted(params)}")


def state_from_document(document: Dict[str, Any]) -> CovarianceMatrix:
    """Covariance matrix from {"matrix": ...} or {"standard_form": ...}, exactly one of them"""
    if not isinstance(document, dict):
        raise MalformedMatrixError("State document must be a JSON object")

    present = [key for key in STATE_KEYS if key in document]
    if len(present) != 1:
        raise MalformedMatrixError(f"State document needs exactly one of {STATE_KEYS}, found {present}")

    # first moments never enter the analysis; only centred states are accepted
    mean = document.get("mean")
    if mean is not None:
        if not isinstance(mean, list) or len(mean) != 4 or any(value != 0 for value in mean):
            raise MalformedMatrixError(f"Only zero-mean states are supported, got mean {mean}")

    if present[0] == "matrix":
        return CovarianceMatrix(document["matrix"])
    return _standard_form_from_document(document["standard_form"]).to_covariance_matrix()


def load_state(filepath: Union[str, Path]) -> CovarianceMatrix:
    """Read a state document; any problem surfaces as MalformedMatrixError"""
    try:
        with open(filepath, 'r', encoding='utf-8') as f:
            document = json.load(f)
    except FileNotFoundError:
        raise MalformedMatrixError(f"State file not found: {filepath}")
    except json.JSONDecodeError as e:
        raise MalformedMatrixError(f"Invalid JSON in {filepath}: {e}")
    except OSError as e:
        raise MalformedMatrixError(f"Cannot read {filepath}: {e}")

    cm = state_from_document(document)
    logger.debug(f"Loaded state from {filepath}")
    return cm


def state_document(state: Union[CovarianceMatrix, StandardForm], name: str = None) -> Dict[str, Any]:
    if isinstance(state, StandardForm):
        document = {"standard_form": state.as_dict()}
    else:
        document = {"matrix": state.to_list()}
    if name:
        document = {"name": name, **document}
    return document


def save_state(state: Union[CovarianceMatrix, StandardForm], filepath: Union[str, Path], name: str = None) -> bool:
    return save_json(state_document(state, name), str(filepath))


def load_state_directory(directory: Union[str, Path] = Config.STATES_PATH) -> Dict[str, Any]:
    """Load every *.json below directory; values are matrices or the error message"""
    states = {}
    data_path = Path(directory)

    if not data_path.exists():
        logger.error(f"State directory '{directory}' not found")
        return states

    for root, dirs, files in os.walk(data_path):
        for file in sorted(files):
            if not file.endswith('.json'):
                continue
            file_path = Path(root) / file
            key = str(file_path.relative_to(data_path).with_suffix(''))
            try:
                states[key] = load_state(file_path)
            except CVBellError as e:
                logger.warning(f"Skipped {file_path.name}: {e}")
                states[key] = str(e)

    logger.info(f"Loaded {sum(isinstance(v, CovarianceMatrix) for v in states.values())}/{len(states)} "
                f"state files from {directory}")
    return states
