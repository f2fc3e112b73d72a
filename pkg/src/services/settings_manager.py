"""Settings manager reading TRADEOFF_LAB_* values from the environment."""

import logging
import os
from collections.abc import MutableMapping
from typing import Optional

from .info_gain import DEFAULT_SEARCH_BUDGET

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class SettingsManager:
    """Typed access to run-time settings.

    Args:
        environ: Key-value store to read from; the process environment by default.
    """

    PREFIX = "TRADEOFF_LAB_"

    def __init__(self, environ: Optional[MutableMapping[str, str]] = None):
        self._settings = os.environ if environ is None else environ

    def _value(self, key: str) -> Optional[str]:
        value = self._settings.get(self.PREFIX + key)
        if value is None or not value.strip():
            return None
        return value.strip()

    def _int(self, key: str, default: int, minimum: int = 1) -> int:
        value = self._value(key)
        if value is None:
            return default
        try:
            parsed = int(value)
        except ValueError:
            parsed = None
        if parsed is None or parsed < minimum:
            logger.warning("ignoring %s%s=%r; using %d", self.PREFIX, key, value, default)
            return default
        return parsed

    def _float(self, key: str, default: float) -> float:
        value = self._value(key)
        if value is None:
            return default
        try:
            parsed = float(value)
        except ValueError:
            parsed = None
        if parsed is None or not parsed > 0:
            logger.warning("ignoring %s%s=%r; using %g", self.PREFIX, key, value, default)
            return default
        return parsed

    def _set(self, key: str, value) -> None:
        self._settings[self.PREFIX + key] = str(value)

    # Parallelism
    def get_threads(self) -> int:
        """Worker threads for suite trials and per-branch recovery."""
        return self._int("THREADS", 1)

    def set_threads(self, threads: int) -> None:
        self._set("THREADS", threads)

    # Logging
    def get_log_level(self) -> str:
        value = self._value("LOG_LEVEL")
        if value is None:
            return "WARNING"
        if value.upper() not in LOG_LEVELS:
            logger.warning("ignoring %sLOG_LEVEL=%r; using WARNING", self.PREFIX, value)
            return "WARNING"
        return value.upper()

    def set_log_level(self, level: str) -> None:
        self._set("LOG_LEVEL", level)

    # Accessible-information search
    def get_search_budget(self) -> int:
        return self._int("SEARCH_BUDGET", DEFAULT_SEARCH_BUDGET)

    def set_search_budget(self, budget: int) -> None:
        self._set("SEARCH_BUDGET", budget)

    # Recovery optimizer
    def get_recovery_tol(self) -> float:
        return self._float("RECOVERY_TOL", 1e-5)

    def set_recovery_tol(self, tol: float) -> None:
        self._set("RECOVERY_TOL", tol)

    def get_recovery_max_iter(self) -> int:
        return self._int("RECOVERY_MAX_ITER", 5000)

    def set_recovery_max_iter(self, max_iter: int) -> None:
        self._set("RECOVERY_MAX_ITER", max_iter)
