# src/config/config.py
import logging
import os
from dataclasses import dataclass
from typing import Tuple

# Paths
this_dir = os.path.dirname(os.path.abspath(__file__))
config_file = os.path.join(this_dir, "config.txt")


def read_config():
    config = {}
    if os.path.exists(config_file):
        with open(config_file, "r", encoding="utf-8") as f:
            for line in f:
                line = line.split("#", 1)[0]
                if "=" in line:
                    key, value = line.strip().split("=", 1)
                    config[key.strip()] = value.strip()
    return config


def parse_window(text: str) -> Tuple[int, int]:
    """Parse ``lo..hi`` into a pair of integers."""
    try:
        lo, hi = text.split("..", 1)
        lo_value, hi_value = int(lo), int(hi)
    except ValueError as e:
        raise RuntimeError(f"[CONFIG] Bad window '{text}', expected lo..hi") from e
    if lo_value > hi_value:
        raise RuntimeError(f"[CONFIG] Empty window '{text}'")
    return lo_value, hi_value


def _int_value(key: str, default: int) -> int:
    raw = config_values.get(key, "")
    if raw == "":
        return default
    try:
        return int(raw)
    except ValueError as e:
        raise RuntimeError(f"[CONFIG] {key} must be an integer, got '{raw}'") from e


# Load config values
config_values = read_config()
FIELD = config_values.get("FIELD", "QQ")
MAX_TERMS = _int_value("MAX_TERMS", 200000)
MAX_ITERATIONS = _int_value("MAX_ITERATIONS", 50000)
MAX_SAT_STEPS = _int_value("MAX_SAT_STEPS", 5)
WINDOW = parse_window(config_values.get("WINDOW", "-2..4"))
MAX_WORKERS = _int_value("MAX_WORKERS", 4)
SEED = _int_value("SEED", 20240611)
LOG_LEVEL = config_values.get("LOG_LEVEL", "WARNING").upper()
CACHE_DIR = config_values.get("CACHE_DIR", "") or None

logging.basicConfig(level=getattr(logging, LOG_LEVEL, logging.WARNING), format="%(asctime)s %(message)s")
LOGGER = logging.getLogger("blowup")


def log_message(message: str) -> None:
    """Default sink for the ``log_function`` callbacks."""
    LOGGER.info(message)


@dataclass(frozen=True)
class Limits:
    """Resource caps handed to every computation that can run long.

    Args:
        max_terms: largest polynomial (or vector) size allowed during reduction.
        max_iterations: S-pair budget of one Gröbner run.
        max_sat_steps: largest saturation exponent tried before a colimit is declared inconclusive.
    """

    max_terms: int = MAX_TERMS
    max_iterations: int = MAX_ITERATIONS
    max_sat_steps: int = MAX_SAT_STEPS


DEFAULT_LIMITS = Limits()
