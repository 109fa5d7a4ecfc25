"""Before/after error table on 150 unseen poses with no contact.

After a 2000-sample identification warm-up the estimator is left running on
a fresh set of poses. Everything the sensor reads is gravity, offset and
noise, so the compensated output should sit at the noise floor.
"""

import numpy as np

from ftcomp import PipelineConfig, run_session
from ftcomp.metrics import before_after_table, bounds_report, format_bounds, format_table
from ftcomp.simulator import make_scenario, scenario_streams

warm, main = scenario_streams(make_scenario("no_contact_eval", seed=0))
state, _ = run_session(PipelineConfig(), warm)
_, outputs = run_session(PipelineConfig(), main, state=state)

raw = np.array([np.r_[s.wrench.force, s.wrench.torque] for s in main])
comp = np.array([np.r_[o.f_contact, o.t_contact] for o in outputs])
print(format_table(before_after_table(raw, comp)))
print()
print("worst-case bounds:", format_bounds(bounds_report(comp)))
