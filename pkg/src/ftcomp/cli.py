"""Command-line entry point: ``ftcomp {simulate,run,replay,metrics}``.

Exit codes: 0 success, 2 usage/config error, 3 input or parse error,
4 numerical failure in the estimator.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import replace
from pathlib import Path

import jsonschema
import numpy as np

from . import io
from .metrics import before_after_table, bounds_report, error_stats, format_bounds
from .model import CompensationParams, compensate_force, compensate_torque
from .pipeline import NonMonotonicTime, PipelineState, pipeline_init, pipeline_step
from .rls import RankDeficient, SingularInnovation
from .simulator import Scenario, make_scenario, scenario_streams
from .so3 import NotARotation

log = logging.getLogger("ftcomp")

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_NUMERIC = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _merge_args(args) -> dict:
    cfg = io.load_run_config(args.config) if getattr(args, "config", None) else {}
    for key, attr in (("scenario", "scenario"), ("seed", "seed"), ("omega", "omega"),
                      ("input_path", "input"), ("warmup_path", "warmup"),
                      ("out_dir", "out"), ("live_rate", "live_rate")):
        val = getattr(args, attr, None)
        if val is not None:
            cfg[key] = val
    return io.validate_run_config(cfg)


def _scenario_from(cfg: dict) -> Scenario:
    try:
        sc = make_scenario(cfg["scenario"], seed=cfg.get("seed", 0), omega=cfg.get("omega"))
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    if "truth" in cfg:
        sc.truth = replace(sc.truth, **cfg["truth"])
    return sc


def _scenario_meta(sc: Scenario, seed: int, n_warm: int, n_main: int) -> dict:
    return {
        "scenario": sc.name,
        "description": sc.description,
        "seed": seed,
        "omega": sc.spec.omega,
        "n_warmup": n_warm,
        "n_samples": n_main,
        "truth": sc.truth.to_dict(),
        "contacts": [{"t_start": c.t_start, "t_end": c.t_end, "frame": c.frame,
                      "ramp": c.ramp, "force": c.wrench.force.tolist(),
                      "torque": c.wrench.torque.tolist(),
                      "point": None if c.point is None else np.asarray(c.point).tolist()}
                     for c in sc.contacts],
    }


def cmd_simulate(cfg: dict) -> int:
    if "scenario" not in cfg:
        raise UsageError("simulate needs --scenario")
    out = Path(cfg.get("out_dir", "."))
    out.mkdir(parents=True, exist_ok=True)
    sc = _scenario_from(cfg)
    warm, main = scenario_streams(sc)
    io.write_samples(out / "samples.csv", main)
    if warm:
        io.write_samples(out / "warmup.csv", warm)
    io.write_json(out / "truth.json", _scenario_meta(sc, cfg.get("seed", 0), len(warm), len(main)))
    log.info("wrote %d samples (+%d warm-up) to %s", len(main), len(warm), out)
    return EXIT_OK


def _load_streams(cfg: dict):
    """Return (warmup, main, truth-metadata or None) for a scenario or CSV input."""
    if "input_path" in cfg:
        warm = io.read_samples(cfg["warmup_path"]) if "warmup_path" in cfg else []
        return warm, io.read_samples(cfg["input_path"]), None
    if "scenario" in cfg:
        sc = _scenario_from(cfg)
        warm, main = scenario_streams(sc)
        return warm, main, _scenario_meta(sc, cfg.get("seed", 0), len(warm), len(main))
    raise UsageError("give either --scenario or --in")


def _stream(state: PipelineState, samples, live_rate: float = 0.0,
            latencies: list | None = None, origin: tuple[float, float] = (0.0, 0.0)):
    """Step through ``samples``; with ``live_rate > 0`` sample ``t`` is released
    at wall time ``origin[0] + (t - origin[1]) / live_rate``."""
    outputs = []
    wall0, t0_sample = origin
    for s in samples:
        if live_rate > 0:
            due = wall0 + (s.t - t0_sample) / live_rate
            delay = due - time.perf_counter()
            if delay > 0:
                time.sleep(delay)
        t0 = time.perf_counter()
        state, out = pipeline_step(state, s)
        if latencies is not None:
            latencies.append(time.perf_counter() - t0)
        outputs.append(out)
    return state, outputs


def evaluation_window(outputs) -> np.ndarray:
    """Indices of outputs emitted after both stages had converged."""
    return np.array([k for k, o in enumerate(outputs)
                     if o.force_converged and o.torque_converged], dtype=int)


def metrics_report(samples, outputs) -> dict:
    idx = evaluation_window(outputs)
    report = {"n_eval": int(idx.size)}
    if idx.size == 0:
        return report
    raw = np.array([np.r_[samples[k].wrench.force, samples[k].wrench.torque] for k in idx])
    comp = np.array([np.r_[outputs[k].f_contact, outputs[k].t_contact] for k in idx])
    bounds = bounds_report(comp)
    report.update({
        "table": [r.to_dict() for r in before_after_table(raw, comp)],
        "bounds": bounds,
        "bounds_text": format_bounds(bounds),
        "contact_force_magnitude": error_stats(np.linalg.norm(comp[:, :3], axis=1)).to_dict()
        | {"mean": float(np.linalg.norm(comp[:, :3], axis=1).mean())},
    })
    return report


def _params_report(state: PipelineState, n_warm: int, n_main: int, meta: dict | None) -> dict:
    rep = {
        "params": state.params.to_dict(),
        "force_converged": state.force.converged,
        "torque_converged": state.torque.converged,
        # counts of updates each stage needed, and the global step index at which it latched
        "force_converged_after_updates": state.force.converged_at,
        "torque_converged_after_updates": state.torque.converged_at,
        "force_converged_step": state.force_converged_step,
        "torque_converged_step": state.torque_converged_step,
        "n_warmup": n_warm,
        "n_samples": n_main,
    }
    if meta is not None:
        t = meta["truth"]
        p = rep["params"]
        rep["truth_error"] = {k: (np.asarray(p[k]) - np.asarray(t[k])).tolist()
                              for k in ("f_base", "f_bias", "centroid", "t_bias")}
    return rep


def _execute(cfg: dict, live_rate: float = 0.0, latencies: list | None = None) -> int:
    pcfg = io.pipeline_config_from(cfg)
    warm, main, meta = _load_streams(cfg)
    if not main:
        raise io.CsvParseError(cfg.get("input_path", "<scenario>"), 1, "no samples")
    out = Path(cfg.get("out_dir", "."))
    out.mkdir(parents=True, exist_ok=True)

    state = pipeline_init(pcfg, cfg.get("seed", 0))
    origin = (time.perf_counter(), (warm or main)[0].t)
    state, _ = _stream(state, warm, live_rate, latencies, origin)
    state, outputs = _stream(state, main, live_rate, latencies, origin)

    io.write_outputs(out / "outputs.csv", main, outputs)
    io.write_json(out / "params.json", _params_report(state, len(warm), len(main), meta))
    io.write_json(out / "metrics.json", metrics_report(main, outputs))
    if meta is not None:
        io.write_json(out / "truth.json", meta)
    return EXIT_OK


def cmd_run(cfg: dict) -> int:
    return _execute(cfg)


def cmd_replay(cfg: dict) -> int:
    if "input_path" not in cfg:
        raise UsageError("replay needs --in <samples.csv>")
    latencies: list[float] = []
    rc = _execute(cfg, cfg.get("live_rate", 1.0), latencies)
    lat = np.array(latencies)
    io.write_json(Path(cfg.get("out_dir", ".")) / "latency.json", {
        "n_steps": int(lat.size),
        "mean_ms": float(lat.mean() * 1e3),
        "max_ms": float(lat.max() * 1e3),
        "p99_ms": float(np.percentile(lat, 99) * 1e3),
        "live_rate": cfg.get("live_rate", 1.0),
    })
    log.info("step latency: mean %.3f ms, worst %.3f ms", lat.mean() * 1e3, lat.max() * 1e3)
    return rc


def cmd_metrics(args) -> int:
    """Evaluate fixed parameters on a sample log (no estimation)."""
    samples = io.read_samples(args.input)
    blob = io.read_json(args.params)
    params = CompensationParams.from_dict(blob.get("params", blob))
    raw = np.array([np.r_[s.wrench.force, s.wrench.torque] for s in samples])
    comp = np.array([np.r_[compensate_force(params.force, s.R_eb, s.wrench.force),
                           compensate_torque(params, s.R_eb, s.wrench.torque)]
                     for s in samples])
    bounds = bounds_report(comp)
    report = {"n_eval": len(samples),
              "table": [r.to_dict() for r in before_after_table(raw, comp)],
              "bounds": bounds, "bounds_text": format_bounds(bounds)}
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    io.write_json(out / "metrics.json", report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ftcomp", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="run configuration JSON")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--out", help="output directory")

    sp = sub.add_parser("simulate", help="write a simulated scenario as CSV + truth JSON")
    common(sp)
    sp.add_argument("--scenario")
    sp.add_argument("--omega", type=float, help="rotation_sweep speed (deg/s)")

    sp = sub.add_parser("run", help="estimate and compensate a scenario or CSV log")
    common(sp)
    sp.add_argument("--scenario")
    sp.add_argument("--omega", type=float)
    sp.add_argument("--in", dest="input", help="sample CSV")
    sp.add_argument("--warmup", help="contact-free sample CSV streamed first")

    sp = sub.add_parser("replay", help="like run, paced at the CSV timestamps")
    common(sp)
    sp.add_argument("--in", dest="input", help="sample CSV")
    sp.add_argument("--warmup")
    sp.add_argument("--live-rate", type=float,
                    help="playback speed multiplier; 0 = as fast as possible (default 1)")

    sp = sub.add_parser("metrics", help="error tables for fixed params on a CSV log")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--params", required=True, help="params JSON from a run")
    sp.add_argument("--out")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "metrics":
            return cmd_metrics(args)
        cfg = _merge_args(args)
        return {"simulate": cmd_simulate, "run": cmd_run, "replay": cmd_replay}[args.command](cfg)
    except (UsageError, jsonschema.ValidationError) as exc:
        msg = exc.message if isinstance(exc, jsonschema.ValidationError) else str(exc)
        print(f"ftcomp: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except (io.CsvParseError, NonMonotonicTime, NotARotation, OSError,
            json.JSONDecodeError, KeyError) as exc:
        print(f"ftcomp: input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (SingularInnovation, RankDeficient, np.linalg.LinAlgError) as exc:
        print(f"ftcomp: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
