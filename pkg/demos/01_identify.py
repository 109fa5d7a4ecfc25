"""Identify the gravity and offset model from contact-free random poses.

The force stage starts from a random guess and locks on within a couple of
hundred samples. The torque stage waits for it, then needs only a few dozen
more because its regressor reuses the force-stage offset.
"""

import numpy as np

from ftcomp import PipelineConfig, run_session
from ftcomp.simulator import derive_f_base, make_scenario, scenario_streams

sc = make_scenario("identify", seed=0)
_, samples = scenario_streams(sc)
state, outputs = run_session(PipelineConfig(), samples)

print(f"{len(samples)} samples at {sc.spec.sample_rate:g} Hz")
print(f"force stage converged after {state.force.converged_at} updates "
      f"(sample {state.force_converged_step})")
print(f"torque stage converged after {state.torque.converged_at} further updates "
      f"(sample {state.torque_converged_step})")

p, t = state.params, sc.truth
rows = [("f_base [N]", p.force.f_base, derive_f_base(t)),
        ("f_bias [N]", p.force.f_bias, t.f_bias),
        ("centroid [m]", p.torque.centroid, t.centroid),
        ("t_bias [N m]", p.torque.t_bias, t.t_bias)]
np.set_printoptions(precision=5, suppress=True)
for name, est, true in rows:
    print(f"{name:<14} est {est}  true {true}  err {np.abs(est - true).max():.1e}")
