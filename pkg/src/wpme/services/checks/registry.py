"""
Check Registry — lazily loads the check plugins and maps check ids to them.
"""
from __future__ import annotations

import threading
from typing import Dict, List, Optional

from wpme.exceptions import ParameterError
from wpme.services.checks.base import CheckPlugin
from wpme.services.common import log_debug, log_warning


class CheckRegistry:
    """Central registry for all check plugins."""

    _instance: Optional["CheckRegistry"] = None

    def __init__(self):
        self._plugins: List[CheckPlugin] = []
        self._by_id: Dict[str, CheckPlugin] = {}
        self._loaded = False
        self._load_lock = threading.Lock()

    @classmethod
    def get_instance(cls) -> "CheckRegistry":
        if cls._instance is None:
            cls._instance = cls()
        return cls._instance

    def register(self, plugin: CheckPlugin):
        """Register a plugin for every check id it handles."""
        for check_id in plugin.check_ids:
            if check_id in self._by_id:
                raise ParameterError(
                    f"check id '{check_id}' already handled by {self._by_id[check_id].name}"
                )
            self._by_id[check_id] = plugin
        self._plugins.append(plugin)
        log_debug(f"Check plugin registered: {plugin.name} ({', '.join(plugin.check_ids)})")

    def _ensure_loaded(self):
        """Lazy-load all check plugins on first use."""
        if self._loaded:
            return
        with self._load_lock:
            if not self._loaded:
                self._load_plugins()
                self._loaded = True

    def _load_plugins(self):
        plugin_classes = []

        try:
            from wpme.services.checks.estimate_check import EstimateCheck
            plugin_classes.append(EstimateCheck)
        except ImportError as e:
            log_warning(f"EstimateCheck not available: {e}")

        try:
            from wpme.services.checks.entropy_check import EntropyMonotonicityCheck
            plugin_classes.append(EntropyMonotonicityCheck)
        except ImportError as e:
            log_warning(f"EntropyMonotonicityCheck not available: {e}")

        try:
            from wpme.services.checks.identity_check import EntropyIdentitiesCheck
            plugin_classes.append(EntropyIdentitiesCheck)
        except ImportError as e:
            log_warning(f"EntropyIdentitiesCheck not available: {e}")

        try:
            from wpme.services.checks.residual_check import DifferentialInequalityCheck, PressureEquationCheck
            plugin_classes.extend([PressureEquationCheck, DifferentialInequalityCheck])
        except ImportError as e:
            log_warning(f"Residual checks not available: {e}")

        try:
            from wpme.services.checks.feasibility_check import FeasibilityCheck
            plugin_classes.append(FeasibilityCheck)
        except ImportError as e:
            log_warning(f"FeasibilityCheck not available: {e}")

        for PluginClass in plugin_classes:
            self.register(PluginClass())

        log_debug(f"{len(self._plugins)} check plugins loaded")

    def get_plugin(self, check_id: str) -> CheckPlugin:
        self._ensure_loaded()
        plugin = self._by_id.get(check_id)
        if plugin is None:
            raise ParameterError(f"no plugin handles check id '{check_id}'")
        return plugin

    def known_ids(self) -> List[str]:
        self._ensure_loaded()
        return sorted(self._by_id)


# Singleton
check_registry = CheckRegistry.get_instance()
