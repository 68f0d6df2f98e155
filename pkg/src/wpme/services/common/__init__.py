"""
Common services - shared logging, serialization and small utilities.
Every other module imports its logging surface from here.
"""

import json
import sys
import time
import logging
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np

from wpme.config.settings import NumericsConfig, settings

# ═══════════════════════════════════════════════════════════════════
# STRUCTURED LOGGING
# ═══════════════════════════════════════════════════════════════════

_logger = logging.getLogger("wpme")


class ColoredFormatter(logging.Formatter):
    """Formatter with ANSI colors for terminal output."""
    COLORS = {
        'DEBUG': '\033[95m',     # Purple
        'INFO': '\033[94m',      # Blue
        'WARNING': '\033[93m',   # Yellow
        'ERROR': '\033[91m',     # Red
        'CRITICAL': '\033[91m',  # Red
    }
    RESET = '\033[0m'

    def format(self, record):
        color = self.COLORS.get(record.levelname, self.RESET)
        record = logging.makeLogRecord(record.__dict__)
        record.msg = f"{color}{record.msg}{self.RESET}"
        return super().format(record)


if not _logger.handlers:
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(ColoredFormatter(
        '%(asctime)s [%(levelname)s] %(message)s',
        datefmt='%H:%M:%S'
    ))
    _logger.addHandler(_handler)
    _logger.setLevel(getattr(logging, settings.log_level, logging.INFO))
    _logger.propagate = False


def set_log_level(level: str) -> None:
    """Change the application log level (CLI --verbose / --quiet)."""
    _logger.setLevel(getattr(logging, level.upper(), logging.INFO))


def log_info(message: str):
    _logger.info(message)


def log_error(message: str):
    _logger.error(message)


def log_warning(message: str):
    _logger.warning(message)


def log_success(message: str):
    _logger.info(f"✅ {message}")


def log_debug(message: str):
    _logger.debug(message)


def log_check(message: str):
    """Log a check step (mapped to INFO)."""
    _logger.info(f"🔎 {message}")


# ═══════════════════════════════════════════════════════════════════
# SERIALIZATION
# ═══════════════════════════════════════════════════════════════════

def format_float(value: float) -> str:
    """17 significant digits, '.' decimal separator; nan/inf spelled out."""
    value = float(value)
    if np.isnan(value):
        return "nan"
    if np.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, NumericsConfig.CSV_FLOAT_FORMAT)


def _json_default(obj: Any) -> Any:
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return str(obj)


def safe_json_dumps(data: Any, indent: int = 2) -> str:
    """JSON dumps with numpy-aware defaults."""
    return json.dumps(data, ensure_ascii=False, indent=indent, default=_json_default)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """Write a CSV with LF endings; floats are rendered with format_float."""
    def _cell(v: Any) -> str:
        if isinstance(v, (bool, np.bool_)):
            return "true" if v else "false"
        if isinstance(v, (float, np.floating)):
            return format_float(v)
        if v is None:
            return ""
        return str(v)

    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_cell(v) for v in row) + "\n")


def read_csv(path) -> List[Dict[str, str]]:
    """Read a CSV written by write_csv into a list of dicts (strings)."""
    with open(path, "r", encoding="utf-8") as f:
        lines = [line.rstrip("\n") for line in f if line.strip()]
    if not lines:
        return []
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:]]


# ═══════════════════════════════════════════════════════════════════
# UTILITIES
# ═══════════════════════════════════════════════════════════════════

def observed_order(coarse_error: float, fine_error: float, ratio: float = 2.0) -> float:
    """Convergence order from errors at spacing h and h/ratio."""
    if fine_error <= 0.0:
        return float("inf")
    if coarse_error <= 0.0:
        return 0.0
    return float(np.log(coarse_error / fine_error) / np.log(ratio))


class Stopwatch:
    """Wall-clock timer used for report wall_time."""

    def __init__(self):
        self._start = time.perf_counter()

    def elapsed(self) -> float:
        return time.perf_counter() - self._start


__all__ = [
    'log_info', 'log_error', 'log_warning', 'log_success', 'log_debug', 'log_check',
    'set_log_level',
    'format_float', 'safe_json_dumps', 'write_csv', 'read_csv',
    'observed_order', 'Stopwatch',
]
