"""Command-line surface: synthesize scenarios, run recordings, sweep tunings.

Subcommands
-----------
synth   Scenario config -> directory of numbered PGM frames (+ config sidecar).
run     Frame directory -> timeseries.csv, targets.jsonl, optional overlays
        and per-frame debug maps.
sweep   Contrast and expansion-rate grids on the looming scenario -> peak
        response table (CSV).

Flag overrides always win over values read from a --params file.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .config import ModelParams, ParamError, default_params, load_params, serialize_params
from .frameio import emit_targets, emit_timeseries, ingest, render_overlay, write_frames, write_pgm, write_ppm
from .pipeline import make_pipeline, prime, step
from .stimuli import Scenario, generate, scenario_from_text, serialize_scenario, weber_contrast

__all__ = ["main"]


def _load_model_params(args) -> ModelParams:
    if args.params:
        text = Path(args.params).read_text()
        params = load_params(text)
    else:
        params = default_params()
    overrides = {}
    if getattr(args, "top_k", None) is not None:
        overrides["top_k"] = args.top_k
    if getattr(args, "weights", None) is not None:
        overrides["channel_weights"] = tuple(args.weights)
    if overrides:
        params = params.replace(**overrides)
    return params


def _cmd_synth(args) -> int:
    scen = Scenario()
    if args.config:
        scen = scenario_from_text(Path(args.config).read_text())
    if args.kind:
        scen = scenario_from_text(f"kind={args.kind}", base=scen)
    frames = generate(scen)
    out = Path(args.out)
    write_frames(out, frames)
    (out / "scenario.cfg").write_text(serialize_scenario(scen))
    print(f"wrote {len(frames)} frames to {out}")
    return 0


def _normalize_map(field: np.ndarray) -> np.ndarray:
    lo, hi = float(field.min()), float(field.max())
    if hi - lo < 1e-30:
        return np.zeros_like(field)
    return (field - lo) / (hi - lo) * 255.0


def _cmd_run(args) -> int:
    params = _load_model_params(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    state = make_pipeline(
        params,
        gate_targets=args.gate_targets,
        debug_maps=args.debug_maps,
    )
    reports = []
    raw_frames = []
    t = 0
    for frame in ingest(args.input):
        t += 1
        if state.photoreceptor is None:
            prime(state, frame)
            continue
        report, state = step(state, frame)
        reports.append(report)
        if args.overlay:
            raw_frames.append(frame * 255.0)
        if args.debug_maps:
            maps_dir = out / "maps"
            maps_dir.mkdir(exist_ok=True)
            for name in ("G", "G_sigma", "M_a", "M_d", "V", "V_prime"):
                write_pgm(maps_dir / f"{name}_{report.t:05d}.pgm",
                          _normalize_map(report.maps[name]))
    if not reports:
        raise ValueError("need at least two frames (the first only primes the pipeline)")
    emit_timeseries(reports, out / "timeseries.csv")
    emit_targets(reports, out / "targets.jsonl")
    if args.overlay:
        overlay_dir = out / "overlay"
        overlay_dir.mkdir(exist_ok=True)
        for frame, report in zip(raw_frames, reports):
            write_ppm(overlay_dir / f"overlay_{report.t:05d}.ppm",
                      render_overlay(frame, report))
        (overlay_dir / "metadata.txt").write_text(
            "arrow length = 1.0 px per unit of population-coded cluster energy\n"
        )
    fired = sum(1 for r in reports if r.collision)
    print(f"processed {len(reports)} frames; collision flagged on {fired}")
    return 0


def _run_peak(params: ModelParams, scen: Scenario) -> tuple:
    state = make_pipeline(params, collect_targets=False)
    peak_u = 0.0
    peak_out = 0.5
    for i, frame in enumerate(generate(scen)):
        if i == 0:
            prime(state, frame / 255.0)
            continue
        report, state = step(state, frame / 255.0)
        peak_u = max(peak_u, abs(report.u))
        peak_out = max(peak_out, report.out)
    return peak_u, peak_out


def _cmd_sweep(args) -> int:
    params = _load_model_params(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["sweep,value,weber_contrast,peak_abs_u,peak_out"]
    base = Scenario(kind="looming_disk")
    for c in args.contrasts:
        scen = scenario_from_text(f"fg_gray={255.0 * (1.0 - c)!r}", base=base)
        frame = generate(scen)[0]
        h, w = frame.shape
        target = (slice(h // 2 - 2, h // 2 + 3), slice(w // 2 - 2, w // 2 + 3))
        surround = (slice(0, 10), slice(0, 10))
        measured = weber_contrast(frame, target, surround)
        peak_u, peak_out = _run_peak(params, scen)
        lines.append(f"contrast,{c:.9g},{measured:.9g},{peak_u:.9g},{peak_out:.9g}")
    for k in args.rates:
        scen = scenario_from_text(f"rate_k={k!r}", base=base)
        peak_u, peak_out = _run_peak(params, scen)
        lines.append(f"rate,{k:.9g},1,{peak_u:.9g},{peak_out:.9g}")
    (out / "sweep.csv").write_text("\n".join(lines) + "\n")
    print(f"wrote {out / 'sweep.csv'}")
    return 0


def _float_list(raw: str) -> list:
    return [float(s) for s in raw.replace(",", " ").split()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loomsense",
        description="Looming-object collision detection on gray frame sequences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="generate a synthetic scenario as PGM frames")
    p_synth.add_argument("--config", help="scenario config file (key=value lines)")
    p_synth.add_argument("--kind", choices=["looming_disk", "translating_bar",
                                            "looming_over_stripes"],
                         help="scenario kind (overrides the config file)")
    p_synth.add_argument("--out", required=True, help="output frame directory")
    p_synth.set_defaults(func=_cmd_synth)

    p_run = sub.add_parser("run", help="run the detector over a PGM frame directory")
    p_run.add_argument("--input", required=True, help="directory of frame_NNNNN.pgm files")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--params", help="model parameter file (key=value lines)")
    p_run.add_argument("--overlay", action="store_true", help="write overlay PPM images")
    p_run.add_argument("--debug-maps", action="store_true",
                       help="write normalized intermediate maps as PGM")
    p_run.add_argument("--gate-targets", action="store_true",
                       help="report targets only on collision frames")
    p_run.add_argument("--top-k", type=int, help="override top_k")
    p_run.add_argument("--weights", type=_float_list,
                       help="override channel weights: 6 reals 'v+ v- w1+ w2- w1- w2+'")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="peak-response table over contrast/rate grids")
    p_sweep.add_argument("--out", required=True, help="output directory")
    p_sweep.add_argument("--params", help="model parameter file")
    p_sweep.add_argument("--top-k", type=int, help="override top_k")
    p_sweep.add_argument("--weights", type=_float_list, help="override channel weights")
    p_sweep.add_argument("--contrasts", type=_float_list, default=[0.25, 0.5, 0.75, 1.0])
    p_sweep.add_argument("--rates", type=_float_list, default=[0.5, 1.0, 1.5, 2.0])
    p_sweep.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParamError, ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
