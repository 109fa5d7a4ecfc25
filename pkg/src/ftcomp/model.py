"""Force and torque compensation models for a wrist-mounted F/T sensor.

Force model (no contact)::

    f_raw = R_eb @ f_base + f_bias

Torque model (no contact)::

    t_raw = skew(centroid) @ R_eb @ f_base + t_bias

Both are linear in their unknowns and are written as ``y = C x`` with a
3x6 regressor ``C`` so they can be fed to the estimators in :mod:`ftcomp.rls`.
The sensor-to-flange rotation is taken as identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .so3 import skew

_I3 = np.eye(3)


def _vec3():
    return field(default_factory=lambda: np.zeros(3))


@dataclass
class ForceParams:
    f_base: np.ndarray = _vec3()   # instrument weight in the robot base frame (N)
    f_bias: np.ndarray = _vec3()   # sensor force offset (N)

    def __post_init__(self):
        self.f_base = np.asarray(self.f_base, dtype=float).reshape(3)
        self.f_bias = np.asarray(self.f_bias, dtype=float).reshape(3)

    @classmethod
    def from_vector(cls, x) -> "ForceParams":
        x = np.asarray(x, dtype=float)
        return cls(x[:3].copy(), x[3:6].copy())

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.f_base, self.f_bias])


@dataclass
class TorqueParams:
    centroid: np.ndarray = _vec3()  # centre of gravity in the sensor frame (m)
    t_bias: np.ndarray = _vec3()    # sensor torque offset (N*m)

    def __post_init__(self):
        self.centroid = np.asarray(self.centroid, dtype=float).reshape(3)
        self.t_bias = np.asarray(self.t_bias, dtype=float).reshape(3)

    @classmethod
    def from_vector(cls, x) -> "TorqueParams":
        x = np.asarray(x, dtype=float)
        return cls(x[:3].copy(), x[3:6].copy())

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.centroid, self.t_bias])


@dataclass
class CompensationParams:
    force: ForceParams = field(default_factory=ForceParams)
    torque: TorqueParams = field(default_factory=TorqueParams)

    def to_dict(self) -> dict:
        return {
            "f_base": self.force.f_base.tolist(),
            "f_bias": self.force.f_bias.tolist(),
            "centroid": self.torque.centroid.tolist(),
            "t_bias": self.torque.t_bias.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CompensationParams":
        return cls(ForceParams(d["f_base"], d["f_bias"]),
                   TorqueParams(d["centroid"], d["t_bias"]))


@dataclass
class MeasurementRow:
    """One 3-equation block ``y = C x`` of a stacked least-squares system."""

    C: np.ndarray
    y: np.ndarray


def force_measurement_row(R_eb, f_raw) -> MeasurementRow:
    """Regressor ``[R_eb | I]`` for the unknowns ``[f_base; f_bias]``."""
    C = np.empty((3, 6))
    C[:, :3] = R_eb
    C[:, 3:] = _I3
    return MeasurementRow(C, np.array(f_raw, dtype=float).reshape(3))


def torque_measurement_row(delta_f, t_raw) -> MeasurementRow:
    """Regressor ``[-skew(delta_f) | I]`` for the unknowns ``[centroid; t_bias]``.

    ``delta_f`` is the bias-corrected force ``f_raw - f_bias``; it stands in
    for the gravity force so that ``skew(p) @ delta_f == -skew(delta_f) @ p``.
    """
    C = np.empty((3, 6))
    C[:, :3] = -skew(delta_f)
    C[:, 3:] = _I3
    return MeasurementRow(C, np.array(t_raw, dtype=float).reshape(3))


def predict_noncontact_force(params: ForceParams, R_eb) -> np.ndarray:
    return R_eb @ params.f_base + params.f_bias


def predict_noncontact_torque(params: CompensationParams, R_eb) -> np.ndarray:
    gravity = R_eb @ params.force.f_base
    return skew(params.torque.centroid) @ gravity + params.torque.t_bias


def compensate_force(params: ForceParams, R_eb, f_raw) -> np.ndarray:
    """Contact force: raw reading minus predicted gravity and bias."""
    return np.asarray(f_raw, dtype=float) - predict_noncontact_force(params, R_eb)


def compensate_torque(params: CompensationParams, R_eb, t_raw) -> np.ndarray:
    """Contact torque: raw reading minus predicted gravity moment and bias.

    The gravity moment is built from the identified weight rotated by the
    current ``R_eb`` rather than from the measured force, so a contact force
    does not leak into the torque prediction.
    """
    return np.asarray(t_raw, dtype=float) - predict_noncontact_torque(params, R_eb)
