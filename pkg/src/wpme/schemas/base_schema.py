"""
Base schema definitions.
Every scenario and report model derives from one of these two bases.
"""

from pydantic import BaseModel


class BaseConfigModel(BaseModel):
    """Strict base for user-supplied configuration: unknown keys fail closed."""

    model_config = {
        "extra": "forbid",
        "validate_assignment": True,
        "frozen": True,
    }


class BaseReportModel(BaseModel):
    """Base for serialized results."""

    model_config = {
        "extra": "forbid",
        "validate_assignment": True,
    }

    def to_summary_dict(self) -> dict:
        return self.model_dump(mode="json")
