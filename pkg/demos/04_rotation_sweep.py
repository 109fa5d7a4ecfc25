"""Spin a horizontal instrument once about its axis with a hanging 1.02 N load.

Gravity on the tool rotates through every sensor axis during the turn, so
any model error shows up as a ripple in the compensated load magnitude.
The load itself is constant, so the magnitude should stay flat at every speed.
"""

import numpy as np

from ftcomp import PipelineConfig, run_session
from ftcomp.simulator import SWEEP_SPEEDS, make_scenario, scenario_streams

print(f"{'omega [deg/s]':>14}{'duration [s]':>14}{'mean |f| [N]':>14}{'std [N]':>10}")
for omega in SWEEP_SPEEDS:
    sc = make_scenario("rotation_sweep", omega=omega)
    warm, main = scenario_streams(sc)
    state, _ = run_session(PipelineConfig(), warm)
    _, outputs = run_session(PipelineConfig(), main, state=state)
    mag = np.linalg.norm([o.f_contact for o in outputs], axis=1)
    print(f"{omega:14g}{360 / omega:14.1f}{mag.mean():14.4f}{mag.std():10.4f}")
