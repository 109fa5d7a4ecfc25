"""Sample-log CSV, per-sample output CSV and JSON run configuration."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable

import jsonschema
import numpy as np

from .pipeline import PipelineConfig, PipelineOutput, SensorSample
from .rls import RlsConfig
from .so3 import NotARotation, Wrench, validate_rotation

SAMPLE_HEADER = ["t", "fx", "fy", "fz", "tx", "ty", "tz",
                 "r11", "r12", "r13", "r21", "r22", "r23", "r31", "r32", "r33"]
OUTPUT_HEADER = ["t", "fcx", "fcy", "fcz", "tcx", "tcy", "tcz", "r_force", "r_torque",
                 "force_converged", "torque_converged", "torque_active",
                 "in_contact_force", "in_contact_torque"]


class CsvParseError(ValueError):
    def __init__(self, path, line: int, msg: str):
        super().__init__(f"{path}:{line}: {msg}")
        self.path, self.line = path, line


def fmt(x: float) -> str:
    # 17 significant digits round-trip any double exactly
    return format(float(x), ".17g")


def write_samples(path, samples: Iterable[SensorSample]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SAMPLE_HEADER)
        for s in samples:
            vals = [s.t, *s.wrench.force, *s.wrench.torque, *np.asarray(s.R_eb).ravel()]
            w.writerow([fmt(v) for v in vals])


def read_samples(path) -> list[SensorSample]:
    samples = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise CsvParseError(path, 1, "empty file, header row missing")
        if [h.strip() for h in header] != SAMPLE_HEADER:
            raise CsvParseError(path, 1, f"bad header {header!r}; expected {SAMPLE_HEADER!r}")
        for row in reader:
            line = reader.line_num
            if not row:
                continue
            if len(row) != len(SAMPLE_HEADER):
                raise CsvParseError(path, line, f"expected {len(SAMPLE_HEADER)} fields, "
                                                f"got {len(row)}")
            try:
                v = np.array([float(x) for x in row])
            except ValueError as exc:
                raise CsvParseError(path, line, str(exc)) from None
            if not np.all(np.isfinite(v)):
                raise CsvParseError(path, line, "non-finite value")
            try:
                R = validate_rotation(v[7:].reshape(3, 3))
            except NotARotation as exc:
                raise CsvParseError(path, line, f"invalid rotation: {exc}") from None
            samples.append(SensorSample(float(v[0]), Wrench(v[1:4], v[4:7]), R))
    return samples


def write_outputs(path, samples: list[SensorSample], outputs: list[PipelineOutput]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(OUTPUT_HEADER)
        for s, o in zip(samples, outputs):
            w.writerow([fmt(s.t), *map(fmt, o.f_contact), *map(fmt, o.t_contact),
                        fmt(o.r_force), fmt(o.r_torque),
                        *(int(b) for b in (o.force_converged, o.torque_converged,
                                           o.torque_active, o.in_contact_force,
                                           o.in_contact_torque))])


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def read_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


_RLS_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "p0_scale": {"type": "number", "minimum": 0},
        "r_noise_scale": {"type": "number", "exclusiveMinimum": 0},
        "epsilon": {"type": "number", "exclusiveMinimum": 0},
        "min_samples": {"type": "integer", "minimum": 1},
        "consecutive_required": {"type": "integer", "minimum": 1},
    },
}
_VEC3 = {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}

RUN_CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "seed": {"type": "integer"},
        "f_th": {"type": "number", "exclusiveMinimum": 0},
        "tau_th": {"type": "number", "exclusiveMinimum": 0},
        "force_rls": _RLS_SCHEMA,
        "torque_rls": _RLS_SCHEMA,
        "scenario": {"type": "string"},
        "omega": {"type": "number", "exclusiveMinimum": 0},
        "input_path": {"type": "string"},
        "warmup_path": {"type": "string"},
        "out_dir": {"type": "string"},
        "live_rate": {"type": "number", "minimum": 0},
        "truth": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "mass": {"type": "number", "minimum": 0},
                "g": {"type": "number", "exclusiveMinimum": 0},
                "R_bg": {"type": "array", "items": _VEC3, "minItems": 3, "maxItems": 3},
                "f_bias": _VEC3,
                "centroid": _VEC3,
                "t_bias": _VEC3,
                "sigma_f": {"type": "number", "minimum": 0},
                "sigma_t": {"type": "number", "minimum": 0},
                "bias_drift_rate": {"type": "number"},
            },
        },
    },
}


def validate_run_config(cfg: dict) -> dict:
    """Validate a run configuration dict; raises ``jsonschema.ValidationError``."""
    jsonschema.validate(cfg, RUN_CONFIG_SCHEMA)
    return cfg


def load_run_config(path) -> dict:
    return validate_run_config(read_json(path))


def pipeline_config_from(cfg: dict) -> PipelineConfig:
    return PipelineConfig(
        force_rls=RlsConfig(**cfg.get("force_rls", {})),
        torque_rls=RlsConfig(**cfg.get("torque_rls", {})),
        f_th=cfg.get("f_th", PipelineConfig.f_th),
        tau_th=cfg.get("tau_th", PipelineConfig.tau_th),
    )
