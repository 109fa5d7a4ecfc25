from dataclasses import replace

import numpy as np
import pytest

from conftest import cross, rodrigues
from ftcomp.model import CompensationParams, ForceParams, TorqueParams, compensate_force
from ftcomp.pipeline import PipelineConfig, run_session
from ftcomp.simulator import (
    ContactEvent,
    EventOutOfRange,
    GroundTruth,
    TrajectorySpec,
    default_truth,
    derive_f_base,
    generate_trajectory,
    make_scenario,
    noiseless,
    scenario_presets,
    scenario_streams,
    synthesize_stream,
)
from ftcomp.so3 import is_rotation, Wrench


def test_derive_f_base():
    np.testing.assert_array_equal(derive_f_base(GroundTruth(mass=0.0)), np.zeros(3))
    t = GroundTruth(mass=1.02 / 9.81)
    np.testing.assert_allclose(derive_f_base(t), [0, 0, -1.02])
    tilt = rodrigues([1, 0, 0], np.deg2rad(5))
    t = GroundTruth(mass=2 / 9.81, R_bg=tilt)
    s5, c5 = np.sin(np.deg2rad(5)), np.cos(np.deg2rad(5))
    np.testing.assert_allclose(derive_f_base(t), [0, 2 * s5, -2 * c5], atol=1e-15)


def test_axial_trajectory_covers_one_turn():
    traj = generate_trajectory(TrajectorySpec("axial_rotation", omega=12.0))
    assert len(traj) == 30_000
    assert traj[-1][0] == pytest.approx(29.999)
    R0 = traj[0][1]
    # angle about z between consecutive samples is omega * dt
    R1 = traj[1][1]
    ang = np.arccos(np.clip((np.trace(R0 @ R1.T) - 1) / 2, -1, 1))
    assert ang == pytest.approx(np.deg2rad(12.0) / 1000, rel=1e-6)
    # half way round the tool x-axis points the other way
    x0 = R0.T @ [1, 0, 0]
    xh = traj[15_000][1].T @ [1, 0, 0]
    np.testing.assert_allclose(xh, -x0, atol=1e-12)
    # the tool z-axis (expressed in the base) never moves
    z = np.array([R.T[:, 2] for _, R in traj[::997]])
    np.testing.assert_allclose(z, np.broadcast_to(z[0], z.shape), atol=1e-12)
    assert len(generate_trajectory(TrajectorySpec("axial_rotation", omega=72.0))) == 5000


def test_static_and_random_trajectories():
    st = generate_trajectory(TrajectorySpec("static", sample_count=20,
                                            base_rotation=rodrigues([0, 1, 1], 0.3)))
    assert all(np.array_equal(R, st[0][1]) for _, R in st)
    a = generate_trajectory(TrajectorySpec(sample_count=50, seed=3))
    b = generate_trajectory(TrajectorySpec(sample_count=50, seed=3))
    c = generate_trajectory(TrajectorySpec(sample_count=50, seed=4))
    assert all(np.array_equal(Ra, Rb) for (_, Ra), (_, Rb) in zip(a, b))
    assert not np.array_equal(a[0][1], c[0][1])
    assert all(is_rotation(R) for _, R in a)
    times = np.array([t for t, _ in a])
    assert np.all(np.diff(times) > 0)


def test_random_orientations_look_uniform():
    traj = generate_trajectory(TrajectorySpec(sample_count=20_000, seed=1))
    g = np.array([R @ [0, 0, -1] for _, R in traj])
    # a uniformly random direction has zero mean and second moment I/3
    np.testing.assert_allclose(g.mean(axis=0), 0, atol=0.03)
    np.testing.assert_allclose(g.T @ g / len(g), np.eye(3) / 3, atol=0.02)


def test_synthesize_examples():
    truth = GroundTruth(mass=2 / 9.81, f_bias=[1, 0, 0], centroid=[0, 0, 0.0435],
                        sigma_f=0, sigma_t=0)
    s = synthesize_stream(truth, TrajectorySpec("static", sample_count=3))
    np.testing.assert_allclose(s[0].wrench.force, [1, 0, -2])
    np.testing.assert_allclose(s[0].wrench.torque, [0, 0, 0], atol=1e-15)

    Rx90 = rodrigues([1, 0, 0], np.pi / 2)
    # static trajectories hold R_be = base_rotation, so R_eb = Rx90 needs its transpose
    s = synthesize_stream(replace(truth, f_bias=np.zeros(3)),
                          TrajectorySpec("static", sample_count=1, base_rotation=Rx90.T))
    np.testing.assert_allclose(s[0].R_eb, Rx90, atol=1e-15)
    np.testing.assert_allclose(s[0].wrench.force, [0, 2, 0], atol=1e-12)
    np.testing.assert_allclose(s[0].wrench.torque, [-0.087, 0, 0], atol=1e-12)


def test_synthesize_matches_model_oracle():
    truth = noiseless(default_truth())
    for s in synthesize_stream(truth, TrajectorySpec(sample_count=50, seed=2)):
        g = s.R_eb @ derive_f_base(truth)
        np.testing.assert_allclose(s.wrench.force, g + truth.f_bias, atol=1e-12)
        np.testing.assert_allclose(s.wrench.torque, cross(truth.centroid, g) + truth.t_bias,
                                   atol=1e-12)


def test_noise_statistics():
    truth = default_truth()
    spec = TrajectorySpec(sample_count=20_000, seed=11)
    noisy = synthesize_stream(truth, spec)
    clean = synthesize_stream(noiseless(truth), spec)
    df = np.array([a.wrench.force - b.wrench.force for a, b in zip(noisy, clean)])
    dt = np.array([a.wrench.torque - b.wrench.torque for a, b in zip(noisy, clean)])
    np.testing.assert_allclose(df.var(axis=0), truth.sigma_f ** 2, rtol=0.1)
    np.testing.assert_allclose(dt.var(axis=0), truth.sigma_t ** 2, rtol=0.1)


def test_contact_additivity():
    truth = default_truth()
    spec = TrajectorySpec(sample_count=1000, seed=5)
    contacts = [ContactEvent(0.2, 0.5, Wrench([1, -2, 0.5], [0.01, 0, -0.02])),
                ContactEvent(0.4, 0.9, Wrench([0, 0, -1.02], [0, 0, 0]), frame="base",
                             point=[0, 0, 0.25], ramp=0.05)]
    with_c = synthesize_stream(truth, spec, contacts)
    without = synthesize_stream(truth, spec)
    for a, b in zip(with_c, without):
        t = a.t
        f_exp = np.zeros(3)
        tau_exp = np.zeros(3)
        if 0.2 <= t < 0.5:
            f_exp += [1, -2, 0.5]
            tau_exp += [0.01, 0, -0.02]
        if 0.4 <= t < 0.9:
            w = min((t - 0.4) / 0.05, (0.9 - t) / 0.05, 1.0)
            f_load = w * (a.R_eb @ [0, 0, -1.02])
            f_exp += f_load
            tau_exp += cross([0, 0, 0.25], f_load)
        np.testing.assert_allclose(a.wrench.force - b.wrench.force, f_exp, atol=1e-12)
        np.testing.assert_allclose(a.wrench.torque - b.wrench.torque, tau_exp, atol=1e-12)


def test_event_out_of_range():
    spec = TrajectorySpec(sample_count=100)
    with pytest.raises(EventOutOfRange):
        synthesize_stream(default_truth(), spec, [ContactEvent(0.05, 0.2, Wrench())])
    with pytest.raises(ValueError):
        ContactEvent(0.3, 0.2, Wrench())


def test_drift_grows_residual_of_frozen_params():
    d = 0.01
    truth = replace(default_truth(), bias_drift_rate=d)
    samples = synthesize_stream(truth, TrajectorySpec(sample_count=10_000, seed=6))
    frozen = ForceParams(derive_f_base(truth), truth.f_bias)
    t = np.array([s.t for s in samples])
    r = np.array([compensate_force(frozen, s.R_eb, s.wrench.force) for s in samples])
    for k in range(3):
        slope = np.polyfit(t, r[:, k], 1)[0]
        assert slope == pytest.approx(d, rel=0.05)


def test_drift_estimator_keeps_adapting():
    truth = replace(default_truth(), bias_drift_rate=0.01)
    samples = synthesize_stream(truth, TrajectorySpec(sample_count=10_000, seed=6))
    state, outs = run_session(PipelineConfig(), samples)
    # residuals stay below f_th, so every sample is used
    assert state.force.sample_count == len(samples)
    assert not any(o.in_contact_force for o in outs[state.force_converged_step:])
    # the bias estimate follows the drift: about the average bias over the run
    np.testing.assert_allclose(state.params.force.f_bias, truth.f_bias + 0.01 * 5.0, atol=0.02)


def test_presets():
    presets = scenario_presets()
    assert set(presets) == {"identify", "no_contact_eval", "phantom", "rotation_sweep"}
    sweep = presets["rotation_sweep"]
    assert sweep.spec.omega == 72.0 and sweep.spec.n_samples() == 5000
    assert sweep.spec.end_time() - sweep.spec.t0 == pytest.approx(5.0)
    assert len(sweep.contacts) == 1 and sweep.contacts[0].frame == "base"
    assert np.linalg.norm(sweep.contacts[0].wrench.force) == pytest.approx(1.02)
    assert presets["no_contact_eval"].spec.n_samples() == 150
    ph = presets["phantom"]
    assert min(c.t_start for c in ph.contacts) * ph.spec.sample_rate > 1860
    assert make_scenario("rotation_sweep", omega=12).spec.n_samples() == 30_000
    with pytest.raises(KeyError):
        make_scenario("nope")
    with pytest.raises(ValueError):
        make_scenario("identify", omega=30)


def test_preset_magnitudes_match_hardware_scale():
    truth = default_truth()
    assert 3.0 <= np.linalg.norm(derive_f_base(truth)) <= 5.0
    np.testing.assert_allclose(truth.centroid[2], 0.0435)


def test_scenario_streams_are_contiguous_in_time():
    warm, main = scenario_streams(make_scenario("no_contact_eval"))
    assert len(warm) == 2000 and len(main) == 150
    assert main[0].t > warm[-1].t
    t = np.array([s.t for s in warm + main])
    assert np.all(np.diff(t) > 0)


def test_identify_noiseless_round_trip_all_presets():
    for name in ("identify", "phantom"):
        sc = make_scenario(name)
        truth = noiseless(sc.truth)
        samples = synthesize_stream(truth, sc.spec, [] if name == "identify" else [])
        state, _ = run_session(PipelineConfig(), samples)
        p = state.params
        exp = CompensationParams(ForceParams(derive_f_base(truth), truth.f_bias),
                                 TorqueParams(truth.centroid, truth.t_bias))
        np.testing.assert_allclose(p.force.as_vector(), exp.force.as_vector(), atol=1e-6)
        np.testing.assert_allclose(p.torque.as_vector(), exp.torque.as_vector(), atol=1e-6)
