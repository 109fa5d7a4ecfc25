"""Slow offset drift with no contact.

The force offset creeps by 0.01 N/s. Residuals stay well under the contact
threshold, so the estimator keeps absorbing new samples and tracks the
drift. With no forgetting factor it lags a little more as the run goes on.
"""

from dataclasses import replace

import numpy as np

from ftcomp import PipelineConfig, run_session
from ftcomp.simulator import TrajectorySpec, default_truth, synthesize_stream

truth = replace(default_truth(), bias_drift_rate=0.01)
samples = synthesize_stream(truth, TrajectorySpec(sample_count=20_000, seed=7))
_, outputs = run_session(PipelineConfig(), samples)

t = np.array([s.t for s in samples])
fc = np.array([o.f_contact for o in outputs])
for lo in range(0, 20, 5):
    win = (t >= lo) & (t < lo + 5)
    print(f"{lo:2d}-{lo + 5:2d} s  MAE per axis {np.abs(fc[win]).mean(axis=0).round(3)} N")
print(f"noise sigma {truth.sigma_f} N, 5 sigma = {5 * truth.sigma_f} N")
