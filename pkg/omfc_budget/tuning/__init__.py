"""滤波腔与读出角调参"""

from .models import (
    BoundedResult,
    ObjectiveKind,
    TraceEntry,
    TuneResult,
    TuneSpec,
    TuneStatus,
    TuneVariable,
    TuneVariableName,
)
from .objective import (
    apply_values,
    band_angle_residual,
    band_integrated_degradation,
    current_values,
    degradation_at,
    ideal_config,
    objective_value,
)
from .optimizer import minimize_bounded, optimize

__all__ = [
    "BoundedResult",
    "ObjectiveKind",
    "TraceEntry",
    "TuneResult",
    "TuneSpec",
    "TuneStatus",
    "TuneVariable",
    "TuneVariableName",
    "apply_values",
    "band_angle_residual",
    "band_integrated_degradation",
    "current_values",
    "degradation_at",
    "ideal_config",
    "objective_value",
    "minimize_bounded",
    "optimize",
]
