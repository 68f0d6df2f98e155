from wpme.services.checks.base import CheckContext, CheckPlugin, CheckResult, CheckTable
from wpme.services.checks.registry import CheckRegistry, check_registry

__all__ = [
    "CheckContext",
    "CheckPlugin",
    "CheckRegistry",
    "CheckResult",
    "CheckTable",
    "check_registry",
]
