import os
import logging
import json
from typing import Any, Dict, List

from sympy import QQ, Rational

# Logging configuration (must run after importing os/logging)
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
LOG_FILE = os.getenv("LOG_FILE", "")


def setup_logging(level: str = "") -> None:
    """Install stream (and optional file) handlers once per process."""
    if logging.getLogger().handlers:
        return
    handlers = []
    formatter = logging.Formatter(
        fmt='%(asctime)s %(levelname)s %(name)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )
    stream_handler = logging.StreamHandler()
    stream_handler.setFormatter(formatter)
    handlers.append(stream_handler)
    if LOG_FILE:
        file_handler = logging.FileHandler(LOG_FILE)
        file_handler.setFormatter(formatter)
        handlers.append(file_handler)
    lvl = (level or LOG_LEVEL).upper()
    logging.basicConfig(level=getattr(logging, lvl, logging.INFO), handlers=handlers)


logger = logging.getLogger("isoquot")

try:
    from dotenv import load_dotenv
    DOTENV_AVAILABLE = True
except ImportError:
    DOTENV_AVAILABLE = False
    logger.warning("python-dotenv not available (install: pip install python-dotenv)")

# =========================
# Config
# =========================
if DOTENV_AVAILABLE:
    load_dotenv()

ENV_DEFAULTS = {
    "ISOQUOT_THREADS":       "1",
    "ISOQUOT_T0_SEQUENCE":   "1/7,1/11,1/13,1/17,1/19,1/23",
    "ISOQUOT_VERIFY_CONFIG": "verify_suites.json",
    "ISOQUOT_HOST":          "0.0.0.0",
    "ISOQUOT_PORT":          "8000",
    "LOG_LEVEL":             "INFO",
    "LOG_FILE":              "",
}

ISOQUOT_THREADS       = int(os.getenv("ISOQUOT_THREADS", ENV_DEFAULTS["ISOQUOT_THREADS"]))  # 1 = serial
ISOQUOT_T0_SEQUENCE   = os.getenv("ISOQUOT_T0_SEQUENCE", ENV_DEFAULTS["ISOQUOT_T0_SEQUENCE"])
ISOQUOT_VERIFY_CONFIG = os.getenv("ISOQUOT_VERIFY_CONFIG", ENV_DEFAULTS["ISOQUOT_VERIFY_CONFIG"])
ISOQUOT_HOST          = os.getenv("ISOQUOT_HOST", ENV_DEFAULTS["ISOQUOT_HOST"])
ISOQUOT_PORT          = int(os.getenv("ISOQUOT_PORT", ENV_DEFAULTS["ISOQUOT_PORT"]))


def ground_types() -> str:
    """Coefficient backend sympy picked for QQ: "gmpy", "flint" or "python"."""
    from sympy.external.gmpy import GROUND_TYPES
    return GROUND_TYPES


def log_ground_types() -> str:
    backend = ground_types()
    if backend == "python":
        logger.warning("sympy runs on pure-python rationals (install gmpy2 for speed)")
    else:
        logger.info(f"sympy ground types: {backend}")
    return backend


def get_threads() -> int:
    """Worker count, re-read so that CLI overrides of the env var take effect."""
    try:
        return max(1, int(os.getenv("ISOQUOT_THREADS", str(ISOQUOT_THREADS))))
    except ValueError:
        logger.warning(f"Invalid ISOQUOT_THREADS={os.getenv('ISOQUOT_THREADS')!r}, using 1")
        return 1


def get_t0_sequence() -> List[Any]:
    """Candidate t0 values as QQ elements, zeros dropped."""
    raw = os.getenv("ISOQUOT_T0_SEQUENCE", ISOQUOT_T0_SEQUENCE)
    values = []
    for item in raw.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            value = QQ.from_sympy(Rational(item))
        except (ValueError, TypeError):
            logger.warning(f"Ignoring invalid t0 candidate {item!r}")
            continue
        if value != 0:
            values.append(value)
    if len(values) < 2:
        logger.warning("ISOQUOT_T0_SEQUENCE needs two usable values, falling back to defaults")
        values = [QQ.from_sympy(Rational(v)) for v in ENV_DEFAULTS["ISOQUOT_T0_SEQUENCE"].split(",")]
    return values


# =========================
# Verification grids
# =========================
DEFAULT_VERIFY_CONFIG: Dict[str, Any] = {
    "engines": {"N_values": [4, 6, 8, 10, 12], "random_functions": 50, "seed": 20240501},
    "n4_closed_form": {"g_max": 4, "d_max": 5},
    "g1": {"N_values": [4, 6], "d_max": 4},
    "rank1": {"N_values": [4, 6, 8], "g_max": 3, "d_span": 3},
    "grw": {"sg_n_values": [2, 3, 4], "sg_g_max": 3, "sg_d_span": 3, "og_n_values": [3], "og_g_max": 2, "og_d_span": 2},
    "duality": {"cases": [[4, 0, 0, 3, 0], [4, 0, 0, 1, 1], [4, 0, 1, 6, 0], [4, 0, 1, 2, 2], [4, 1, 1, 1, 1],
                          [4, 1, 2, 0, 3], [6, 0, 0, 5, 1], [6, 1, 1, 3, 1], [4, 2, 3, 0, 3], [4, 2, 3, 2, 2]]},
    "compatibility": {"cases": [[4, 0, 0, 1, 0], [4, 1, 1, 1, 0], [6, 2, 2, 1, 0], [4, 0, 1, 4, 0], [4, 1, 2, 2, 1],
                                [6, 0, 0, 5, 0], [6, 1, 1, 3, 0], [8, 0, 0, 9, 0], [4, 2, 2, 1, 0], [6, 1, 2, 4, 2]],
                      "symmetric_cases": [[8, 0, 0, 3, 0], [8, 0, 0, 1, 1], [10, 0, 0, 7, 0], [10, 0, 0, 5, 1], [10, 1, 1, 1, 0]]},
    "oracle": {"N_values": [4, 6], "d_max": 3, "rank1_N_values": [4, 6], "rank1_d_max": 2,
               "symmetric_N_values": [6, 8], "symmetric_d_max": 2},
    "lagrange_burmann": {"N_values": [4, 6], "d_max": 3},
    "fclass": {"N_values": [4, 6], "g_max": 2, "d_max": 3, "oracle_N": 4},
    "jacobian": {"n_values": [2, 3, 4], "og_n_values": [2]},
    "euler": {"series": [[4, 2, 6], [6, 2, 4], [8, 2, 3]], "weight_checks": [[4, 2, 2], [6, 2, 1]]},
    "second_kind": {"N_values": [6, 8], "g_max": 3, "d_max": 4},
}


def load_verify_config(path: str = "") -> Dict[str, Any]:
    """Load the verification grids, falling back to the built-in defaults."""
    path = path or os.getenv("ISOQUOT_VERIFY_CONFIG", ISOQUOT_VERIFY_CONFIG)
    config = json.loads(json.dumps(DEFAULT_VERIFY_CONFIG))
    try:
        with open(path, "r") as f:
            loaded = json.load(f)
        for suite, params in loaded.items():
            if isinstance(params, dict):
                config.setdefault(suite, {}).update(params)
    except Exception as e:
        logging.warning(f"Could not load verify config {path}: {e}")
    return config


def save_verify_config(config: Dict[str, Any], path: str = "") -> bool:
    path = path or os.getenv("ISOQUOT_VERIFY_CONFIG", ISOQUOT_VERIFY_CONFIG)
    try:
        with open(path, "w") as f:
            json.dump(config, f, indent=2, sort_keys=True)
        return True
    except Exception as e:
        logging.error(f"Could not save verify config {path}: {e}")
        return False
