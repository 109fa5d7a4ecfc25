"""Recursive least squares with vector measurements, and a batch oracle.

The estimator tracks a 6-parameter vector observed through 3-row blocks
``y_k = C_k x + v_k`` with ``v_k ~ N(0, R_noise)``. Each update is the
standard minimum-trace gain / covariance recursion::

    K = P C^T (R_noise + C P C^T)^-1
    x <- x + K (y - C x)
    P <- (I - K C) P                      (evaluated in Joseph form)

``RlsState`` is treated as a value: :func:`rls_update` returns a new state
and never mutates its argument.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .model import MeasurementRow

N_PARAMS = 6
N_MEAS = 3
INNOVATION_COND_MAX = 1e12


class SingularInnovation(ArithmeticError):
    """Raised when the innovation covariance cannot be inverted reliably."""


class RankDeficient(ArithmeticError):
    """Raised when a stacked regressor does not determine all parameters."""


@dataclass(frozen=True)
class RlsConfig:
    p0_scale: float = 1e6
    r_noise_scale: float = 2.5e-3
    epsilon: float = 1e-3
    min_samples: int = 50
    consecutive_required: int = 10

    def __post_init__(self):
        if not self.p0_scale >= 0:
            raise ValueError("p0_scale must be non-negative")
        for name in ("r_noise_scale", "epsilon"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.min_samples < 1 or self.consecutive_required < 1:
            raise ValueError("min_samples and consecutive_required must be >= 1")


@dataclass
class RlsState:
    x_hat: np.ndarray
    P: np.ndarray
    R_noise: np.ndarray
    config: RlsConfig = field(default_factory=RlsConfig)
    sample_count: int = 0
    last_delta_norm: float = float("inf")
    converged: bool = False
    consecutive_small: int = 0
    converged_at: int | None = None


def rls_init(config: RlsConfig = RlsConfig(), x0=None, n_meas: int = N_MEAS) -> RlsState:
    """Fresh estimator state; the parameter dimension follows ``x0`` (default 6)."""
    x0 = np.zeros(N_PARAMS) if x0 is None else np.array(x0, dtype=float).reshape(-1)
    return RlsState(
        x_hat=x0,
        P=config.p0_scale * np.eye(x0.size),
        R_noise=config.r_noise_scale * np.eye(n_meas),
        config=config,
    )


def residual_norm(state: RlsState, row: MeasurementRow) -> float:
    """2-norm of ``C x_hat - y`` using the current (a priori) estimate."""
    return float(np.linalg.norm(row.C @ state.x_hat - row.y))


def rls_update(state: RlsState, row: MeasurementRow) -> RlsState:
    C, y, P = row.C, row.y, state.P
    PCt = P @ C.T
    S = state.R_noise + C @ PCt
    if not np.all(np.isfinite(S)):
        raise SingularInnovation("innovation covariance has non-finite entries")
    try:
        S_inv = np.linalg.inv(S)
    except np.linalg.LinAlgError:
        raise SingularInnovation(f"innovation covariance is singular:\n{S}") from None
    # 1-norm condition number; S is only 3x3 so the explicit inverse is cheap
    cond = np.abs(S).sum(axis=0).max() * np.abs(S_inv).sum(axis=0).max()
    if not cond <= INNOVATION_COND_MAX:
        raise SingularInnovation(f"innovation covariance is ill-conditioned (cond_1 = {cond:.3e})")
    K = PCt @ S_inv

    dx = K @ (y - C @ state.x_hat)
    # Joseph form of (I - K C) P: equal for this gain, but the short form loses
    # most significant digits when P0 / R_noise is ~1e8
    A = np.eye(P.shape[0]) - K @ C
    P_new = A @ P @ A.T + K @ state.R_noise @ K.T
    P_new = 0.5 * (P_new + P_new.T)

    cfg = state.config
    delta = float(np.linalg.norm(dx))
    count = state.sample_count + 1
    small = state.consecutive_small + 1 if delta < cfg.epsilon else 0
    converged = state.converged or (
        small >= cfg.consecutive_required and count >= cfg.min_samples)
    return replace(
        state,
        x_hat=state.x_hat + dx,
        P=P_new,
        sample_count=count,
        last_delta_norm=delta,
        consecutive_small=small,
        converged=converged,
        converged_at=state.converged_at if state.converged else (count if converged else None),
    )


def stack_rows(rows: Sequence[MeasurementRow]) -> tuple[np.ndarray, np.ndarray]:
    if len(rows) == 0:
        raise ValueError("no measurement rows")
    return np.vstack([r.C for r in rows]), np.concatenate([r.y for r in rows])


def batch_solve(rows: Sequence[MeasurementRow]) -> np.ndarray:
    """Ordinary least-squares estimate over all rows at once.

    Uses an SVD-based solver rather than forming ``(C^T C)^-1`` explicitly.
    Raises :class:`RankDeficient` when the stacked regressor has rank < 6.
    """
    C, y = stack_rows(rows)
    x, _, rank, _ = np.linalg.lstsq(C, y, rcond=None)
    if rank < C.shape[1]:
        raise RankDeficient(f"stacked regressor has rank {rank} < {C.shape[1]}")
    return x
