# src/utils.py - shared helpers: logging, JSON I/O, number formatting

import logging
import os
import json
import math
from pathlib import Path
from typing import Dict, Any

from config import Config

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logging():
    """Setup logging to the log file and stderr"""
    level = getattr(logging, str(Config.LOG_LEVEL).upper(), logging.INFO)

    # stdout is reserved for JSON/CSV payloads, so console logging goes to stderr
    try:
        Path(Config.LOG_FILE).parent.mkdir(parents=True, exist_ok=True)
        logging.basicConfig(
            level=level,
            format=LOG_FORMAT,
            handlers=[
                logging.FileHandler(Config.LOG_FILE),
                logging.StreamHandler()
            ]
        )
    except (PermissionError, FileNotFoundError, OSError):
        # Read-only working directory - console only
        logging.basicConfig(
            level=level,
            format=LOG_FORMAT,
            handlers=[
                logging.StreamHandler()
            ]
        )

    return logging.getLogger("cvbell")


def set_log_level(level_name: str):
    """Change the level of the root logger after setup"""
    level = getattr(logging, str(level_name).upper(), None)
    if not isinstance(level, int):
        raise ValueError(f"Unknown log level: {level_name}")
    logging.getLogger().setLevel(level)


def round_sig(value: float, digits: int = Config.SIGNIFICANT_DIGITS) -> float:
    """Round a float to a number of significant digits"""
    if value is None or not isinstance(value, float):
        return value
    if not math.isfinite(value) or value == 0.0:
        return value
    return float(f"{value:.{digits}g}")


def round_floats(data: Any, digits: int = Config.SIGNIFICANT_DIGITS) -> Any:
    """Recursively round every float in a JSON-like structure"""
    if isinstance(data, dict):
        return {key: round_floats(value, digits) for key, value in data.items()}
    if isinstance(data, (list, tuple)):
        return [round_floats(value, digits) for value in data]
    if isinstance(data, float):
        return round_sig(data, digits)
    return data


def to_json(data: Dict[str, Any]) -> str:
    """Serialize a report to stable JSON text"""
    return json.dumps(round_floats(data), indent=2, ensure_ascii=False, allow_nan=True)


def save_json(data: Dict[str, Any], filepath: str) -> bool:
    """Save data as JSON with error handling"""
    try:
        Path(filepath).parent.mkdir(parents=True, exist_ok=True)

        with open(filepath, 'w', encoding='utf-8') as f:
            f.write(to_json(data))
            f.write("\n")
        return True
    except Exception as e:
        logging.error(f"Failed to save JSON to {filepath}: {e}")
        return False


def ensure_dir(directory: str) -> bool:
    """Ensure directory exists"""
    try:
        os.makedirs(directory, exist_ok=True)
        return True
    except (PermissionError, OSError):
        logging.warning(f"Cannot create directory {directory}")
        return False
