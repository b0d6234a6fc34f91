"""Command-line harness: generate, pod, place, reconstruct, assimilate,
pipeline, properties."""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import linalg
from .experiments import (
    ExperimentConfig,
    generate_trajectories,
    list_presets,
    load_preset,
    run_pipeline,
)
from .pod import compute_pod
from .properties import run_all
from .sensing import qdeim_place


def _load_config(args):
    if args.config:
        cfg = ExperimentConfig.from_json(args.config)
    elif args.preset:
        cfg = load_preset(args.preset)
    else:
        raise SystemExit("need --config or --preset")
    if args.seed is not None:
        cfg.seed = args.seed
    if args.noise_std is not None:
        cfg.noise_std = args.noise_std
    if args.out is not None:
        cfg.output_dir = args.out
    return cfg


def _add_config_flags(sub):
    sub.add_argument("--config", help="path to a JSON experiment config")
    sub.add_argument("--preset", help=f"bundled preset; one of {', '.join(list_presets())}")
    sub.add_argument("--seed", type=int, default=None, help="override the noise seed")
    sub.add_argument("--noise-std", dest="noise_std", type=float, default=None,
                     help="override the observation noise standard deviation")
    sub.add_argument("--out", default=None, help="output directory")


def cmd_generate(args):
    cfg = _load_config(args)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    _, train, test = generate_trajectories(cfg)
    train.to_csv(out / "train.csv")
    test.to_csv(out / "test.csv")
    print(f"wrote {out / 'train.csv'} ({train.states.shape[0]} x {train.states.shape[1]})")
    print(f"wrote {out / 'test.csv'} ({test.states.shape[0]} x {test.states.shape[1]})")
    return 0


def cmd_pod(args):
    cfg = _load_config(args)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    _, train, _ = generate_trajectories(cfg)
    mean = train.states.mean(axis=0) if cfg.center else np.zeros(train.states.shape[1])
    basis = compute_pod((train.states - mean).T, cfg.n_modes)
    linalg.save_matrix_csv(out / "pod_modes.csv", basis.phi)
    linalg.save_matrix_csv(out / "singular_values.csv", basis.singular_values.reshape(-1, 1))
    print(f"wrote {out / 'pod_modes.csv'} and {out / 'singular_values.csv'}")
    return 0


def cmd_place(args):
    cfg = _load_config(args)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    _, train, _ = generate_trajectories(cfg)
    mean = train.states.mean(axis=0) if cfg.center else np.zeros(train.states.shape[1])
    basis = compute_pod((train.states - mean).T, cfg.n_modes)
    sel = qdeim_place(basis.leading(cfg.placement_modes or cfg.n_modes), cfg.n_sensors)
    sel.to_csv(out / "sensors.csv")
    print(f"sensor indices: {[int(i) for i in sel.indices]}")
    return 0


def cmd_reconstruct(args):
    cfg = _load_config(args)
    result = run_pipeline(cfg)
    v = cfg.vanilla_modes or cfg.n_modes
    errs = result.errors_vanilla[v]
    print(f"vanilla (m={v}) time-mean relative error: {np.nanmean(errs):.4f}")
    print(f"artifacts in {cfg.output_dir}")
    return 0


def cmd_assimilate(args):
    cfg = _load_config(args)
    result = run_pipeline(cfg)
    print(
        "assimilation post-transient mean relative error: "
        f"{result.summary['dasdeim_post_transient_mean']:.3e}"
    )
    print(f"artifacts in {cfg.output_dir}")
    return 0


def cmd_pipeline(args):
    cfg = _load_config(args)
    try:
        result = run_pipeline(cfg)
    except Exception as exc:  # surface the failing stage
        raise SystemExit(f"pipeline failed: {exc}") from exc
    print(json.dumps(result.summary, indent=2, sort_keys=True))
    print(f"artifacts in {cfg.output_dir}", file=sys.stderr)
    return 0


def cmd_properties(args):
    report = run_all(seed=args.seed or 0, corrupt_basis=args.inject_corruption)
    payload = {}
    failures = 0
    for suite, checks in report.items():
        payload[suite] = {
            "passed": sum(1 for _, ok, _ in checks if ok),
            "failed": sum(1 for _, ok, _ in checks if not ok),
            "checks": [
                {"name": name, "passed": ok, "detail": detail} for name, ok, detail in checks
            ],
        }
        for name, ok, detail in checks:
            status = "PASS" if ok else "FAIL"
            print(f"[{status}] {suite}: {name}" + (f" ({detail})" if detail else ""))
            failures += 0 if ok else 1
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        with open(Path(args.out) / "properties.json", "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    print(f"{failures} failing check(s)")
    return 1 if failures else 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="sdeim",
        description="Sparse-sensor state reconstruction and kernel-ODE assimilation experiments",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    for name, fn, desc in [
        ("generate", cmd_generate, "write train/test trajectories"),
        ("pod", cmd_pod, "extract the basis and singular values"),
        ("place", cmd_place, "greedy sensor placement"),
        ("reconstruct", cmd_reconstruct, "pointwise interpolation baseline"),
        ("assimilate", cmd_assimilate, "kernel-ODE data assimilation"),
        ("pipeline", cmd_pipeline, "full experiment with summary.json"),
    ]:
        sub = subs.add_parser(name, help=desc)
        _add_config_flags(sub)
        sub.set_defaults(fn=fn)
    prop = subs.add_parser("properties", help="run all module invariant suites")
    prop.add_argument("--seed", type=int, default=0)
    prop.add_argument("--out", default=None, help="directory for properties.json")
    prop.add_argument("--inject-corruption", action="store_true",
                      help="negative control: corrupt the basis fed to the pod suite")
    prop.set_defaults(fn=cmd_properties)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
