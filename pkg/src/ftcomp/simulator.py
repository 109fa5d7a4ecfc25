"""Ground-truth F/T sensor simulator and the bundled experiment scenarios.

Raw readings are generated from the same no-contact model the estimator
assumes, plus scheduled contact wrenches, linear force-bias drift and
i.i.d. Gaussian noise::

    f_raw = f_contact + R_eb @ f_base + f_bias + drift * t + n_f
    t_raw = t_contact + skew(centroid) @ R_eb @ f_base + t_bias + n_t

Everything is seeded; the same inputs always produce the same samples.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.spatial.transform import Rotation

from .pipeline import SensorSample
from .so3 import Wrench, skew

G = 9.81


class EventOutOfRange(ValueError):
    """Raised when a contact event falls outside the trajectory time span."""


@dataclass
class GroundTruth:
    mass: float = 0.35                      # kg
    g: float = G                            # m/s^2
    R_bg: np.ndarray = field(default_factory=lambda: np.eye(3))  # gravity -> base
    f_bias: np.ndarray = field(default_factory=lambda: np.zeros(3))
    centroid: np.ndarray = field(default_factory=lambda: np.zeros(3))
    t_bias: np.ndarray = field(default_factory=lambda: np.zeros(3))
    sigma_f: float = 0.05                   # N
    sigma_t: float = 0.005                  # N*m
    bias_drift_rate: float = 0.0            # N/s, every force axis

    def __post_init__(self):
        self.R_bg = np.asarray(self.R_bg, dtype=float)
        self.f_bias = np.asarray(self.f_bias, dtype=float).reshape(3)
        self.centroid = np.asarray(self.centroid, dtype=float).reshape(3)
        self.t_bias = np.asarray(self.t_bias, dtype=float).reshape(3)
        if self.mass < 0 or self.sigma_f < 0 or self.sigma_t < 0:
            raise ValueError("mass and noise levels must be non-negative")

    def to_dict(self) -> dict:
        return {
            "mass": self.mass,
            "g": self.g,
            "R_bg": self.R_bg.tolist(),
            "f_base": derive_f_base(self).tolist(),
            "f_bias": self.f_bias.tolist(),
            "centroid": self.centroid.tolist(),
            "t_bias": self.t_bias.tolist(),
            "sigma_f": self.sigma_f,
            "sigma_t": self.sigma_t,
            "bias_drift_rate": self.bias_drift_rate,
        }


@dataclass
class ContactEvent:
    """Constant (or trapezoidal, if ``ramp > 0``) external wrench.

    With ``frame="sensor"`` the wrench is fixed in the sensor frame. With
    ``frame="base"`` it is fixed in the robot base frame (a hanging load, say)
    and rotated into the sensor frame each sample. If ``point`` (sensor frame)
    is given, the force also produces a moment about the sensor origin.
    """

    t_start: float
    t_end: float
    wrench: Wrench
    frame: str = "sensor"
    ramp: float = 0.0
    point: np.ndarray | None = None

    def __post_init__(self):
        if not self.t_start < self.t_end:
            raise ValueError("contact must satisfy t_start < t_end")
        if self.frame not in ("sensor", "base"):
            raise ValueError(f"unknown contact frame {self.frame!r}")
        if self.ramp < 0 or 2 * self.ramp > self.t_end - self.t_start:
            raise ValueError("ramp must be non-negative and fit inside the event")

    def envelope(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        active = (t >= self.t_start) & (t < self.t_end)
        if self.ramp == 0:
            return active.astype(float)
        up = (t - self.t_start) / self.ramp
        down = (self.t_end - t) / self.ramp
        return np.where(active, np.clip(np.minimum(up, down), 0.0, 1.0), 0.0)


@dataclass
class TrajectorySpec:
    kind: str = "random_orientations"   # | "axial_rotation" | "static"
    sample_rate: float = 1000.0          # Hz
    sample_count: int | None = None
    duration: float | None = None        # s, used when sample_count is None
    omega: float | None = None           # deg/s, axial_rotation only
    seed: int = 0
    base_rotation: np.ndarray = field(default_factory=lambda: np.eye(3))  # end -> base at t0
    t0: float = 0.0

    def __post_init__(self):
        if self.kind not in ("random_orientations", "axial_rotation", "static"):
            raise ValueError(f"unknown trajectory kind {self.kind!r}")
        if not self.sample_rate > 0:
            raise ValueError("sample_rate must be positive")
        if self.kind == "axial_rotation" and not (self.omega and self.omega > 0):
            raise ValueError("axial_rotation needs a positive omega (deg/s)")
        self.base_rotation = np.asarray(self.base_rotation, dtype=float)

    def n_samples(self) -> int:
        if self.sample_count is not None:
            return int(self.sample_count)
        if self.kind == "axial_rotation" and self.duration is None:
            return int(round(360.0 / self.omega * self.sample_rate))
        if self.duration is None:
            raise ValueError("trajectory needs sample_count or duration")
        return int(round(self.duration * self.sample_rate))

    def end_time(self) -> float:
        return self.t0 + self.n_samples() / self.sample_rate


@dataclass
class Scenario:
    """A ready-to-run experiment: truth, main trajectory, contacts.

    ``warmup`` is an optional contact-free trajectory streamed first to
    identify the parameters before the main segment is evaluated.
    """

    name: str
    truth: GroundTruth
    spec: TrajectorySpec
    contacts: list[ContactEvent] = field(default_factory=list)
    warmup: TrajectorySpec | None = None
    description: str = ""


def derive_f_base(truth: GroundTruth) -> np.ndarray:
    """Instrument weight expressed in the robot base frame."""
    return truth.R_bg @ np.array([0.0, 0.0, -truth.mass * truth.g])


def _trajectory_arrays(spec: TrajectorySpec) -> tuple[np.ndarray, np.ndarray]:
    n = spec.n_samples()
    t = spec.t0 + np.arange(n) / spec.sample_rate
    if spec.kind == "random_orientations":
        rng = np.random.default_rng(spec.seed)
        R_be = Rotation.random(n, random_state=rng).as_matrix() if n else np.empty((0, 3, 3))
    elif spec.kind == "axial_rotation":
        angles = np.deg2rad(spec.omega) * np.arange(n) / spec.sample_rate
        R_be = spec.base_rotation @ Rotation.from_euler("z", angles).as_matrix()
    else:
        R_be = np.broadcast_to(spec.base_rotation, (n, 3, 3))
    return t, np.ascontiguousarray(np.transpose(R_be, (0, 2, 1)))


def generate_trajectory(spec: TrajectorySpec) -> list[tuple[float, np.ndarray]]:
    """Timestamped base -> end rotations (``R_eb``) following ``spec``.

    ``axial_rotation`` spins the tool about its own z-axis at ``omega`` deg/s
    starting from ``base_rotation``; by default it covers exactly one turn.
    """
    t, R_eb = _trajectory_arrays(spec)
    return [(float(ti), Ri) for ti, Ri in zip(t, R_eb)]


def _contact_arrays(contacts, t, R_eb):
    f = np.zeros((len(t), 3))
    tau = np.zeros((len(t), 3))
    for ev in contacts:
        w = ev.envelope(t)[:, None]
        if ev.frame == "sensor":
            f_ev = np.broadcast_to(ev.wrench.force, f.shape)
            tau_ev = np.broadcast_to(ev.wrench.torque, tau.shape)
        else:
            f_ev = R_eb @ ev.wrench.force
            tau_ev = R_eb @ ev.wrench.torque
        if ev.point is not None:
            tau_ev = tau_ev + np.cross(np.asarray(ev.point, dtype=float), f_ev)
        f += w * f_ev
        tau += w * tau_ev
    return f, tau


def synthesize_stream(truth: GroundTruth, spec: TrajectorySpec,
                      contacts: list[ContactEvent] = ()) -> list[SensorSample]:
    t, R_eb = _trajectory_arrays(spec)
    if len(t) == 0:
        return []
    t_lo, t_hi = t[0], spec.end_time()
    for ev in contacts:
        if ev.t_start < t_lo or ev.t_end > t_hi:
            raise EventOutOfRange(
                f"contact [{ev.t_start}, {ev.t_end}] outside trajectory [{t_lo}, {t_hi}]")

    # noise is drawn before contacts are added so streams with and without
    # contacts differ only by the contact wrench
    rng = np.random.default_rng([spec.seed, 1])
    n_f = rng.normal(0.0, 1.0, (len(t), 3)) * truth.sigma_f
    n_t = rng.normal(0.0, 1.0, (len(t), 3)) * truth.sigma_t

    gravity = R_eb @ derive_f_base(truth)
    f_bias = truth.f_bias + truth.bias_drift_rate * t[:, None]
    f_nc = gravity + f_bias + n_f
    t_nc = gravity @ skew(truth.centroid).T + truth.t_bias + n_t
    f_c, t_c = _contact_arrays(contacts, t, R_eb)
    f_raw = f_c + f_nc if contacts else f_nc
    t_raw = t_c + t_nc if contacts else t_nc
    return [SensorSample(float(t[k]), Wrench(f_raw[k], t_raw[k]), R_eb[k])
            for k in range(len(t))]


def noiseless(truth: GroundTruth) -> GroundTruth:
    return replace(truth, sigma_f=0.0, sigma_t=0.0)


# Magnitudes follow the hardware experiment: a few newtons of gravity and
# offset per force axis, ~0.1 N*m per torque axis, centroid 4.35 cm along z.
def default_truth() -> GroundTruth:
    return GroundTruth(
        mass=0.35,
        R_bg=Rotation.from_euler("xy", [2.0, -1.5], degrees=True).as_matrix(),
        f_bias=np.array([4.6, -2.3, 2.8]),
        centroid=np.array([0.0012, -0.0008, 0.0435]),
        t_bias=np.array([0.05, -0.10, 0.07]),
    )


IDENTIFY_SAMPLES = 2000
EVAL_POSES = 150
PHANTOM_CONTACT_START = 1860
SWEEP_LOAD = 1.02        # N, weight of a 104 g reference mass
SWEEP_SPEEDS = (12.0, 30.0, 45.0, 72.0)
SWEEP_SIGMA_F = 0.03     # N, matches the ~0.03 N spread seen on the 30 s sweep
TIP_POINT = np.array([0.0, 0.0, 0.25])  # m, instrument tip in the sensor frame


def identify_scenario(seed: int = 0) -> Scenario:
    return Scenario(
        "identify", default_truth(),
        TrajectorySpec("random_orientations", sample_count=IDENTIFY_SAMPLES, seed=seed),
        description="random poses, no contact: parameter identification")


def no_contact_eval_scenario(seed: int = 0) -> Scenario:
    warm = TrajectorySpec("random_orientations", sample_count=IDENTIFY_SAMPLES, seed=seed)
    return Scenario(
        "no_contact_eval", default_truth(),
        TrajectorySpec("random_orientations", sample_count=EVAL_POSES, seed=seed + 1,
                       t0=warm.end_time()),
        warmup=warm,
        description="150 random poses, no contact, after an identification warm-up")


def phantom_scenario(seed: int = 0) -> Scenario:
    rate = 1000.0
    t_c = PHANTOM_CONTACT_START / rate
    press = Wrench([0.4, -0.3, -2.5], [0.0, 0.0, 0.0])
    contacts = [ContactEvent(t_c + 0.2 + k * 0.9, t_c + 0.8 + k * 0.9, press,
                             ramp=0.02, point=TIP_POINT)
                for k in range(3)]
    return Scenario(
        "phantom", default_truth(),
        TrajectorySpec("random_orientations", sample_rate=rate, sample_count=4800, seed=seed),
        contacts,
        description="identification then repeated trapezoidal indentation pulses "
                    f"after sample {PHANTOM_CONTACT_START} (synthetic phantom profile)")


def rotation_sweep_scenario(omega: float = 72.0, seed: int = 0) -> Scenario:
    """Instrument held horizontally and spun once about its axis with a hanging load."""
    truth = replace(default_truth(), sigma_f=SWEEP_SIGMA_F)
    warm = TrajectorySpec("random_orientations", sample_count=IDENTIFY_SAMPLES, seed=seed)
    horizontal = Rotation.from_euler("y", 90.0, degrees=True).as_matrix()
    spec = TrajectorySpec("axial_rotation", omega=omega, seed=seed + 1,
                          base_rotation=horizontal, t0=warm.end_time())
    # hanging mass: constant in the base frame, lever arm to the instrument tip
    load_base = truth.R_bg @ np.array([0.0, 0.0, -SWEEP_LOAD])
    load = ContactEvent(spec.t0, spec.end_time(), Wrench(load_base, np.zeros(3)),
                        frame="base", point=TIP_POINT)
    return Scenario("rotation_sweep", truth, spec, [load], warmup=warm,
                    description=f"360 deg axial rotation at {omega:g} deg/s "
                                f"with a {SWEEP_LOAD} N lateral load")


SCENARIOS = {
    "identify": identify_scenario,
    "no_contact_eval": no_contact_eval_scenario,
    "phantom": phantom_scenario,
    "rotation_sweep": rotation_sweep_scenario,
}


def scenario_presets(seed: int = 0) -> dict[str, Scenario]:
    return {name: make(seed=seed) for name, make in SCENARIOS.items()}


def make_scenario(name: str, seed: int = 0, omega: float | None = None) -> Scenario:
    if name not in SCENARIOS:
        raise KeyError(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}")
    if name == "rotation_sweep":
        return rotation_sweep_scenario(omega if omega is not None else 72.0, seed=seed)
    if omega is not None:
        raise ValueError("omega only applies to the rotation_sweep scenario")
    return SCENARIOS[name](seed=seed)


def scenario_streams(sc: Scenario) -> tuple[list[SensorSample], list[SensorSample]]:
    """Samples for the warm-up (possibly empty) and main segments of ``sc``."""
    warm = synthesize_stream(sc.truth, sc.warmup) if sc.warmup is not None else []
    return warm, synthesize_stream(sc.truth, sc.spec, sc.contacts)
