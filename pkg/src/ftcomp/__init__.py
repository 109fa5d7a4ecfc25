"""Online gravity and bias compensation for wrist-mounted force/torque sensors."""

from .model import (
    CompensationParams,
    ForceParams,
    MeasurementRow,
    TorqueParams,
    compensate_force,
    compensate_torque,
    force_measurement_row,
    predict_noncontact_force,
    predict_noncontact_torque,
    torque_measurement_row,
)
from .pipeline import (
    NonMonotonicTime,
    PipelineConfig,
    PipelineOutput,
    PipelineState,
    SensorSample,
    pipeline_init,
    pipeline_run,
    pipeline_step,
    run_session,
)
from .rls import (
    RankDeficient,
    RlsConfig,
    RlsState,
    SingularInnovation,
    batch_solve,
    residual_norm,
    rls_init,
    rls_update,
)
from .so3 import NotARotation, Wrench, gravity_wrench, skew, validate_rotation

__version__ = "0.1.0"

__all__ = [
    "CompensationParams",
    "ForceParams",
    "MeasurementRow",
    "TorqueParams",
    "compensate_force",
    "compensate_torque",
    "force_measurement_row",
    "predict_noncontact_force",
    "predict_noncontact_torque",
    "torque_measurement_row",
    "NonMonotonicTime",
    "PipelineConfig",
    "PipelineOutput",
    "PipelineState",
    "SensorSample",
    "pipeline_init",
    "pipeline_run",
    "pipeline_step",
    "run_session",
    "RankDeficient",
    "RlsConfig",
    "RlsState",
    "SingularInnovation",
    "batch_solve",
    "residual_norm",
    "rls_init",
    "rls_update",
    "NotARotation",
    "Wrench",
    "gravity_wrench",
    "skew",
    "validate_rotation",
]
