"""
Centralized check configuration.
One entry per check id a scenario may request: the regime it applies to, the
family of plugin that runs it and the per-check parameters it accepts.
"""

from typing import Any, Dict, List

from wpme.exceptions import ParameterError

POROUS = "porous"   # p > 1
FAST = "fast"       # 0 < p < 1
ANY = "any"


class CheckConfig:
    """Catalogue of every check id with its regime and parameters."""

    CHECKS = {
        "porous_li_yau": {
            "label": "Li–Yau estimate, constant α > 1",
            "order": 1,
            "kind": "estimate",
            "regime": POROUS,
            "required": ["m", "alpha"],
            "optional": ["t_check_min", "tol"],
        },
        "fast_li_yau_limit": {
            "label": "Fast-diffusion Li–Yau limit α → 1 (K = 0)",
            "order": 2,
            "kind": "estimate",
            "regime": FAST,
            "required": ["m"],
            "optional": ["t_check_min", "tol"],
        },
        "porous_li_yau_sharp": {
            "label": "Li–Yau estimate with halved curvature coefficient",
            "order": 3,
            "kind": "estimate",
            "regime": POROUS,
            "required": ["m", "alpha"],
            "optional": ["t_check_min", "tol"],
        },
        "fast_davies": {
            "label": "Fast-diffusion Davies-type estimate, 0 < α < 1",
            "order": 4,
            "kind": "estimate",
            "regime": FAST,
            "required": ["m", "alpha"],
            "optional": ["t_check_min", "tol"],
        },
        "porous_hamilton": {
            "label": "Hamilton-type estimate, α(t) = e^{2MKt}",
            "order": 5,
            "kind": "estimate",
            "regime": POROUS,
            "required": ["m"],
            "optional": ["t_check_min", "tol"],
        },
        "porous_li_xu_hyperbolic": {
            "label": "Li–Xu-type estimate, hyperbolic schedule",
            "order": 6,
            "kind": "estimate",
            "regime": POROUS,
            "required": ["m"],
            "optional": ["t_check_min", "tol"],
        },
        "porous_li_xu_linear": {
            "label": "Li–Xu-type estimate, linear schedule",
            "order": 7,
            "kind": "estimate",
            "regime": POROUS,
            "required": ["m"],
            "optional": ["t_check_min", "tol"],
        },
        "small_time_combined": {
            "label": "Combined small-time bound 2ãMK + ã/t",
            "order": 8,
            "kind": "estimate",
            "regime": POROUS,
            "required": ["m"],
            "optional": ["t_check_min", "tol", "mkt_max"],
        },
        "entropy_porous": {
            "label": "N and W monotonicity, porous regime",
            "order": 9,
            "kind": "entropy",
            "regime": POROUS,
            "required": ["m"],
            "optional": ["t_check_min"],
        },
        "entropy_fast": {
            "label": "N monotonicity and W-rate bound, fast regime",
            "order": 10,
            "kind": "entropy",
            "regime": FAST,
            "required": ["m"],
            "optional": ["eps", "t_check_min"],
        },
        "entropy_identities": {
            "label": "Integral identities behind the entropy formulas",
            "order": 11,
            "kind": "identity",
            "regime": ANY,
            "required": ["m"],
            "optional": ["t_check_min", "tol"],
        },
        "pressure_equation": {
            "label": "Pressure equation residual",
            "order": 12,
            "kind": "identity",
            "regime": ANY,
            "required": [],
            "optional": ["t_check_min", "tol"],
        },
        "differential_inequality": {
            "label": "Differential inequality for the Li–Yau quantity",
            "order": 13,
            "kind": "identity",
            "regime": ANY,
            "required": ["m"],
            "optional": ["alpha", "schedule", "t_check_min", "tol"],
        },
        "feasibility": {
            "label": "Feasibility coefficient A(ε₁, ε₂) of the fast estimate",
            "order": 14,
            "kind": "arithmetic",
            "regime": FAST,
            "required": ["m", "alpha", "eps1", "eps2"],
            "optional": ["require_feasible"],
        },
    }

    # CheckSpec fields besides the id
    PARAMETERS = [
        "m", "alpha", "eps", "eps1", "eps2", "t_check_min", "tol", "mkt_max", "require_feasible", "schedule",
    ]

    @classmethod
    def get_check_order(cls) -> List[str]:
        """Check ids in catalogue order."""
        return sorted(cls.CHECKS.keys(), key=lambda k: cls.CHECKS[k]["order"])

    @classmethod
    def get_check_config(cls, check_id: str) -> Dict[str, Any]:
        if check_id not in cls.CHECKS:
            raise ParameterError(
                f"unknown check id '{check_id}' (known: {', '.join(cls.get_check_order())})"
            )
        return cls.CHECKS[check_id]

    @classmethod
    def get_checks_by_kind(cls, kind: str) -> List[str]:
        return [k for k in cls.get_check_order() if cls.CHECKS[k]["kind"] == kind]

    @classmethod
    def allowed_parameters(cls, check_id: str) -> List[str]:
        config = cls.get_check_config(check_id)
        return config["required"] + config["optional"]

    @classmethod
    def validate_parameters(cls, check_id: str, given: Dict[str, Any]) -> None:
        """Every required parameter present, nothing outside the allowed set."""
        config = cls.get_check_config(check_id)
        missing = [name for name in config["required"] if given.get(name) is None]
        if missing:
            raise ParameterError(f"{check_id} needs {', '.join(missing)}")
        allowed = set(cls.allowed_parameters(check_id))
        extra = sorted(name for name, value in given.items() if value is not None and name not in allowed)
        if extra:
            raise ParameterError(f"{check_id} does not take {', '.join(extra)}")

    @classmethod
    def validate_regime(cls, check_id: str, p: float) -> None:
        regime = cls.get_check_config(check_id)["regime"]
        if regime == POROUS and not p > 1.0:
            raise ParameterError(f"{check_id} applies to the porous regime: p > 1 required, got p={p:g}")
        if regime == FAST and not 0.0 < p < 1.0:
            raise ParameterError(f"{check_id} applies to the fast regime: 0 < p < 1 required, got p={p:g}")
