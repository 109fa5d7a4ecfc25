"""Three presses on a soft phantom after identification.

While the tool presses, the residual jumps above the threshold and both
stages stop updating. The compensated output then reports the press and
the parameters stay put. Between presses the output drops back to noise.
"""

import numpy as np

from ftcomp import PipelineConfig, run_session
from ftcomp.simulator import make_scenario, scenario_streams

sc = make_scenario("phantom", seed=0)
_, samples = scenario_streams(sc)
state, outputs = run_session(PipelineConfig(), samples)

t = np.array([s.t for s in samples])
fc = np.array([o.f_contact for o in outputs])
gated = np.array([o.in_contact_force for o in outputs])
print(f"force stage converged at sample {state.force_converged_step}")
for k, ev in enumerate(sc.contacts):
    inside = (t >= ev.t_start + ev.ramp) & (t < ev.t_end - ev.ramp)
    print(f"press {k + 1}: {ev.t_start:.2f}-{ev.t_end:.2f} s, "
          f"mean output {fc[inside].mean(axis=0).round(3)} N "
          f"(applied {ev.wrench.force}), gated {gated[inside].mean():.0%}")
quiet = t > sc.contacts[-1].t_end + 0.05
print(f"after the last press: mean |f| = {np.linalg.norm(fc[quiet], axis=1).mean():.3f} N")
print(f"samples used by the force stage: {state.force.sample_count} of {len(samples)}")
