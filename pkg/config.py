import logging
import math
import os
from dotenv import load_dotenv

from errors import ConfigError

load_dotenv()


def _int_env(name: str, default: int, minimum: int) -> int:
    raw = os.getenv(name, "").strip()
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}")
    if value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
    return value


# Потоки для bench (QKBP_THREADS в .env), по умолчанию: все ядра
THREADS = _int_env("QKBP_THREADS", os.cpu_count() or 1, 1)

# Число значений λ на сетке
GRID_SIZE = _int_env("QKBP_GRID_SIZE", 1600, 2)

# Лимит времени RG в секундах, 'inf': без лимита
_time_limit_raw = os.getenv("QKBP_TIME_LIMIT", "120").strip()
try:
    TIME_LIMIT = float(_time_limit_raw)
except ValueError:
    raise ConfigError(f"QKBP_TIME_LIMIT must be a number or 'inf', got {_time_limit_raw!r}")
if math.isnan(TIME_LIMIT) or TIME_LIMIT < 0:
    raise ConfigError(f"QKBP_TIME_LIMIT must be non-negative, got {_time_limit_raw!r}")

# Перебор больше 2^24 подмножеств не запускаем
BRUTE_FORCE_MAX_N = _int_env("QKBP_BRUTE_FORCE_MAX_N", 24, 1)

LOG_LEVEL = os.getenv("QKBP_LOG_LEVEL", "INFO").strip().upper() or "INFO"
_level_names = getattr(logging, "getLevelNamesMapping", lambda: dict(logging._nameToLevel))()  # Python < 3.11
if LOG_LEVEL not in _level_names:
    raise ConfigError(f"QKBP_LOG_LEVEL must be a logging level name, got {LOG_LEVEL!r}")
LOG_FILE = os.getenv("QKBP_LOG_FILE", "").strip() or None
