"""Compensation error statistics (MAE, max abs error, std) and report tables."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

COMPONENTS = ("fx", "fy", "fz", "tx", "ty", "tz")


class EmptyInput(ValueError):
    pass


@dataclass(frozen=True)
class ErrorStats:
    mae: float
    max_ae: float
    std: float   # population standard deviation
    n: int

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ComparisonRow:
    component: str
    before: ErrorStats
    after: ErrorStats
    reduction_pct: float

    def to_dict(self) -> dict:
        return {"component": self.component, "before": self.before.to_dict(),
                "after": self.after.to_dict(), "reduction_pct": self.reduction_pct}


def error_stats(values) -> ErrorStats:
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise EmptyInput("error statistics need at least one value")
    a = np.abs(v)
    return ErrorStats(float(a.mean()), float(a.max()), float(v.std()), int(v.size))


def reduction_pct(before: ErrorStats, after: ErrorStats) -> float:
    if before.mae == 0:
        return 0.0
    return 100.0 * (before.mae - after.mae) / before.mae


def _as_columns(residuals) -> np.ndarray:
    r = np.asarray(residuals, dtype=float)
    if r.ndim != 2 or r.shape[1] != len(COMPONENTS):
        raise ValueError(f"expected an (n, 6) array of residuals, got shape {r.shape}")
    return r


def before_after_table(raw, compensated) -> list[ComparisonRow]:
    """One row per wrench axis comparing raw readings with compensated output.

    Both inputs are ``(n, 6)`` arrays ordered ``fx fy fz tx ty tz``. Under no
    contact the ideal compensated output is zero, so both arrays are errors.
    """
    raw, compensated = _as_columns(raw), _as_columns(compensated)
    if raw.shape != compensated.shape:
        raise ValueError("before and after residuals must have equal lengths")
    rows = []
    for k, name in enumerate(COMPONENTS):
        b, a = error_stats(raw[:, k]), error_stats(compensated[:, k])
        rows.append(ComparisonRow(name, b, a, reduction_pct(b, a)))
    return rows


def symmetric_bound(values) -> float:
    return error_stats(values).max_ae


def bounds_report(compensated) -> dict[str, float]:
    """Symmetric worst-case bound ``max |e|`` per axis."""
    compensated = _as_columns(compensated)
    return {name: symmetric_bound(compensated[:, k]) for k, name in enumerate(COMPONENTS)}


def format_bounds(bounds: dict[str, float]) -> dict[str, str]:
    return {k: f"±{v:.3f}" for k, v in bounds.items()}


def format_table(rows: list[ComparisonRow]) -> str:
    lines = [f"{'axis':<5}{'cond':<8}{'MAE':>9}{'MaxAE':>9}{'Std':>9}{'MAE comp.':>11}"]
    for r in rows:
        lines.append(f"{r.component:<5}{'before':<8}{r.before.mae:9.4f}"
                     f"{r.before.max_ae:9.4f}{r.before.std:9.4f}{r.reduction_pct:10.1f}%")
        lines.append(f"{'':<5}{'after':<8}{r.after.mae:9.4f}"
                     f"{r.after.max_ae:9.4f}{r.after.std:9.4f}")
    return "\n".join(lines)
