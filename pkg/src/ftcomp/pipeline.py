"""Cascaded real-time compensation: force RLS, then torque RLS.

Per sample the force stage is updated unless it has already converged and the
a priori residual says the sensor is in contact. Once the force stage has
converged the torque stage starts, using the bias-corrected force as its
regressor and its own contact threshold. Contact wrenches are emitted every
sample from the current parameter estimates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .model import (
    CompensationParams,
    ForceParams,
    TorqueParams,
    compensate_force,
    compensate_torque,
    force_measurement_row,
    torque_measurement_row,
)
from .rls import RlsConfig, RlsState, residual_norm, rls_init, rls_update
from .so3 import Wrench


class NonMonotonicTime(ValueError):
    """Raised when a sample's timestamp does not advance past the previous one."""


@dataclass
class SensorSample:
    t: float
    wrench: Wrench
    R_eb: np.ndarray  # base -> end rotation, i.e. transpose of the FK rotation


@dataclass(frozen=True)
class PipelineConfig:
    force_rls: RlsConfig = field(default_factory=RlsConfig)
    torque_rls: RlsConfig = field(default_factory=RlsConfig)
    f_th: float = 0.5     # N
    tau_th: float = 0.02  # N*m

    def __post_init__(self):
        if not (self.f_th > 0 and self.tau_th > 0):
            raise ValueError("contact thresholds must be positive")


@dataclass
class PipelineOutput:
    f_contact: np.ndarray
    t_contact: np.ndarray
    force_converged: bool
    torque_converged: bool
    torque_active: bool
    in_contact_force: bool
    in_contact_torque: bool
    params: CompensationParams
    r_force: float = float("nan")
    r_torque: float = float("nan")


@dataclass
class PipelineState:
    config: PipelineConfig
    force: RlsState
    torque: RlsState
    last_t: float | None = None
    step_count: int = 0
    force_converged_step: int | None = None
    torque_converged_step: int | None = None

    @property
    def params(self) -> CompensationParams:
        return CompensationParams(ForceParams.from_vector(self.force.x_hat),
                                  TorqueParams.from_vector(self.torque.x_hat))


def pipeline_init(config: PipelineConfig = PipelineConfig(), seed: int = 0,
                  initial: CompensationParams | None = None) -> PipelineState:
    """Start both stages with random estimates drawn from ``seed``.

    ``initial`` optionally warm-starts the estimates from a previous session
    (the covariances are still reset to ``p0_scale * I``).
    """
    rng = np.random.default_rng(seed)
    x0_f = rng.uniform(-1.0, 1.0, 6)
    x0_t = rng.uniform(-1.0, 1.0, 6)
    if initial is not None:
        x0_f, x0_t = initial.force.as_vector(), initial.torque.as_vector()
    return PipelineState(config, rls_init(config.force_rls, x0_f),
                         rls_init(config.torque_rls, x0_t))


def pipeline_step(state: PipelineState, sample: SensorSample
                  ) -> tuple[PipelineState, PipelineOutput]:
    if state.last_t is not None and not sample.t > state.last_t:
        raise NonMonotonicTime(
            f"sample time {sample.t!r} does not follow previous {state.last_t!r}")
    cfg = state.config
    R = sample.R_eb
    f_raw, t_raw = sample.wrench.force, sample.wrench.torque
    step = state.step_count + 1

    force = state.force
    row_f = force_measurement_row(R, f_raw)
    r_f = residual_norm(force, row_f)
    in_contact_f = r_f >= cfg.f_th
    if not in_contact_f or not force.converged:
        force = rls_update(force, row_f)
    force_params = ForceParams.from_vector(force.x_hat)
    f_contact = compensate_force(force_params, R, f_raw)

    torque = state.torque
    r_t = float("nan")
    in_contact_t = False
    if force.converged:
        row_t = torque_measurement_row(f_raw - force_params.f_bias, t_raw)
        r_t = residual_norm(torque, row_t)
        in_contact_t = r_t >= cfg.tau_th
        if not in_contact_t or not torque.converged:
            torque = rls_update(torque, row_t)
        params = CompensationParams(force_params, TorqueParams.from_vector(torque.x_hat))
        t_contact = compensate_torque(params, R, t_raw)
    else:
        params = CompensationParams(force_params, TorqueParams.from_vector(torque.x_hat))
        t_contact = np.zeros(3)

    new_state = PipelineState(
        config=cfg,
        force=force,
        torque=torque,
        last_t=sample.t,
        step_count=step,
        force_converged_step=state.force_converged_step
        or (step if force.converged else None),
        torque_converged_step=state.torque_converged_step
        or (step if torque.converged else None),
    )
    out = PipelineOutput(
        f_contact=f_contact,
        t_contact=t_contact,
        force_converged=force.converged,
        torque_converged=torque.converged,
        torque_active=force.converged,
        in_contact_force=bool(in_contact_f),
        in_contact_torque=bool(in_contact_t),
        params=params,
        r_force=r_f,
        r_torque=r_t,
    )
    return new_state, out


def run_session(config: PipelineConfig, samples: Iterable[SensorSample], seed: int = 0,
                state: PipelineState | None = None
                ) -> tuple[PipelineState, list[PipelineOutput]]:
    """Fold :func:`pipeline_step` over ``samples`` and keep the final state.

    Pass ``state`` to continue an existing session instead of starting fresh.
    """
    if state is None:
        state = pipeline_init(config, seed)
    outputs = []
    for sample in samples:
        state, out = pipeline_step(state, sample)
        outputs.append(out)
    if not outputs:
        raise ValueError("empty sample stream")
    return state, outputs


def pipeline_run(config: PipelineConfig, samples: Iterable[SensorSample], seed: int = 0,
                 state: PipelineState | None = None
                 ) -> tuple[CompensationParams, list[PipelineOutput]]:
    state, outputs = run_session(config, samples, seed, state)
    return state.params, outputs
