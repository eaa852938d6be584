"""Evaluation measures for quantification and an executable check of their axioms."""
from .axioms import (
    PropertyMatrix,
    Status,
    Verdict,
    bmon_derivative,
    check_property,
    property_matrix,
    replay,
)
from .distributions import (
    Codeframe,
    Prevalence,
    SmoothingConfig,
    perverse_estimator,
    project,
    smooth,
    validate_prevalence,
)
from .measures import EvalContext, MeasureId, score, upper_bound
from .scenarios import PropertyId, Scenario, fixed_scenarios

__version__ = "0.1.0"

__all__ = [
    "Codeframe",
    "EvalContext",
    "MeasureId",
    "Prevalence",
    "PropertyId",
    "PropertyMatrix",
    "Scenario",
    "SmoothingConfig",
    "Status",
    "Verdict",
    "bmon_derivative",
    "check_property",
    "fixed_scenarios",
    "perverse_estimator",
    "project",
    "property_matrix",
    "replay",
    "score",
    "smooth",
    "upper_bound",
    "validate_prevalence",
]
