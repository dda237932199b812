"""Command-line pipeline.

Subcommands cover the full experiment flow: lay the glimpse grid, produce
capture-worthiness scores (ingest a file, run the stand-in scorer on
frames, or apply a trained model to feature vectors), train the worthiness
classifier, solve for trajectories, generate baselines, interpolate,
render, evaluate, analyze score distributions, and serve the annotation
backend. Every randomized command requires an explicit --seed, and reruns
with identical config and seeds write byte-identical output files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import baselines, metrics, render, scoring, solver
from .config import load_config
from .grid import glimpse_clip
from .scoring import load_feature_set, load_score_map, save_score_map

__all__ = ["main", "build_parser"]


def _write_json(path, doc) -> None:
    with open(path, "w") as f:
        json.dump(doc, f, sort_keys=True, indent=2)
        f.write("\n")


def _load_grid_from_score_file(path, cfg):
    with open(path) as f:
        doc = json.load(f)
    grid = cfg.grid_for_steps(len(doc["scores"]))
    return load_score_map(path, grid)


def _continuous_from_files(paths, cfg):
    """Flatten trajectory files (single or set) into resampled continuous ones."""
    out = []
    for path in paths:
        trajs, _doc = solver.load_trajectory_set(path)
        for traj in trajs:
            if isinstance(traj, solver.DiscreteTrajectory):
                traj = solver.interpolate(traj, cfg.compare_fps, cfg.interval_seconds)
            out.append(metrics.resample(traj, cfg.compare_fps))
    return out


def _cmd_grid(args, cfg) -> int:
    grid = cfg.grid_for_duration(args.duration)
    doc = {
        "num_steps": grid.num_steps,
        "interval_seconds": grid.interval,
        "latitudes": list(grid.latitudes),
        "longitudes": list(grid.longitudes),
        "locations_per_step": grid.locations_per_step,
        "num_glimpses": grid.n_glimpses,
    }
    if args.out:
        _write_json(args.out, doc)
    print(json.dumps(doc, sort_keys=True))
    return 0


def _cmd_score(args, cfg) -> int:
    if args.mode == "file":
        sm = _load_grid_from_score_file(args.infile, cfg)
        if args.video_id:
            sm = scoring.ScoreMap(sm.grid, sm.values, video_id=args.video_id)
        save_score_map(args.out, sm)
    elif args.mode == "standin":
        frames, meta = render.load_frames(args.frames)
        duration = meta["num_frames"] / meta["fps"]
        grid = cfg.grid_for_duration(duration)
        cam = cfg.camera()
        values = np.zeros(grid.shape)
        for g in grid.glimpses():
            clip = glimpse_clip(frames, meta["fps"], grid, g, cam)
            i, j = grid.indices_of(g.dir)
            values[g.t, i, j] = scoring.standin_score(
                clip, alpha=cfg.standin_alpha, beta=cfg.standin_beta
            )
        sm = scoring.ScoreMap(grid, values, video_id=args.video_id or Path(args.frames).name)
        save_score_map(args.out, sm)
    else:  # model
        model = scoring.load_worthiness_model(args.model)
        feats = load_feature_set(args.features)
        grid = cfg.grid_for_steps(args.num_steps)
        sm = scoring.score_glimpses(model, feats, grid)
        saved_id = args.video_id or sm.video_id
        sm = scoring.ScoreMap(grid, sm.values, video_id=saved_id)
        save_score_map(args.out, sm)
    print(f"wrote {args.out}")
    return 0


def _cmd_train(args, cfg) -> int:
    humancam = load_feature_set(args.humancam)
    glimpses = load_feature_set(args.glimpses)
    data = scoring.assemble_training_set(humancam, glimpses, args.heldout, args.seed)
    model = scoring.train_worthiness(data, C=cfg.regularization_c)
    scoring.save_worthiness_model(args.out, model)
    print(
        f"wrote {args.out}: {len(data)} records "
        f"({data.labels.count('positive')} positive), "
        f"final loss {model.loss_trace[-1]:.6f}"
    )
    return 0


def _cmd_solve(args, cfg) -> int:
    sm = _load_grid_from_score_file(args.scores, cfg)
    trajs = solver.solve_topk(sm, epsilon=cfg.epsilon, K=cfg.k)
    solver.save_trajectory_set(args.out, trajs, video_id=sm.video_id, interval=sm.grid.interval)
    distinct = len({t.steps for t in trajs})
    print(f"wrote {args.out}: {len(trajs)} trajectories ({distinct} distinct paths), "
          f"best aggregate {trajs[0].aggregate_score:.4f}")
    return 0


def _cmd_baseline(args, cfg) -> int:
    if args.kind == "eyelevel":
        grid = cfg.grid_for_duration(args.duration)
        trajs = baselines.eye_level_baseline(grid)
        video_id = args.video_id
    elif args.kind == "center":
        grid = cfg.grid_for_duration(args.duration)
        if args.raw_out:
            from .grid import STGlimpse
            from .sphere import Direction

            trajs, raws = baselines.center_baseline(
                grid, K=cfg.k, sigma=cfg.sigma, seed=args.seed, return_raw=True
            )
            raw_trajs = [
                solver.DiscreteTrajectory(
                    tuple(STGlimpse(t, Direction(th, ph)) for t, (th, ph) in enumerate(raw))
                )
                for raw in raws
            ]
            solver.save_trajectory_set(args.raw_out, raw_trajs, video_id=args.video_id,
                                       interval=grid.interval)
        else:
            trajs = baselines.center_baseline(grid, K=cfg.k, sigma=cfg.sigma, seed=args.seed)
        video_id = args.video_id
    else:  # nostitch
        sm = _load_grid_from_score_file(args.scores, cfg)
        grid = sm.grid
        trajs = baselines.no_stitch_sample(sm, K=cfg.k, temperature=cfg.temperature, seed=args.seed)
        video_id = args.video_id or sm.video_id
    solver.save_trajectory_set(args.out, trajs, video_id=video_id, interval=grid.interval)
    print(f"wrote {args.out}: {len(trajs)} trajectories")
    return 0


def _cmd_interp(args, cfg) -> int:
    trajs, doc = solver.load_trajectory_set(args.traj)
    out = []
    for t in trajs:
        if isinstance(t, solver.ContinuousTrajectory):
            raise ValueError("input already continuous")
        out.append(solver.interpolate(t, args.fps, cfg.interval_seconds))
    if len(out) == 1 and args.single:
        solver.save_trajectory(args.out, out[0], video_id=doc.get("video_id", ""))
    else:
        solver.save_trajectory_set(args.out, out, video_id=doc.get("video_id", ""))
    print(f"wrote {args.out}: {len(out)} continuous trajectories at {args.fps} fps")
    return 0


def _cmd_render(args, cfg) -> int:
    frames, meta = render.load_frames(args.frames)
    trajs, _doc = solver.load_trajectory_set(args.traj)
    traj = trajs[args.index]
    if isinstance(traj, solver.DiscreteTrajectory):
        traj = solver.interpolate(traj, meta["fps"], cfg.interval_seconds)
    job = render.RenderJob(tuple(frames), traj, cfg.camera(), out_dir=Path(args.out))
    render.render_video(job, workers=args.workers)
    print(f"wrote {traj.num_frames} frames to {args.out}")
    return 0


def _cmd_eval(args, cfg) -> int:
    if args.what == "humanedit":
        gens = _continuous_from_files([args.gen], cfg)
        humans = _continuous_from_files(args.humans, cfg)
        rows = []
        report = {}
        for mk in ("cosine", "overlap"):
            m = metrics.SimilarityMeasure(mk, fov=cfg.hfov)
            for pk in ("trajectory", "frame"):
                val = float(np.mean([metrics.pool(g, humans, m, pk) for g in gens]))
                report[f"{mk}_{pk}"] = val
                rows.append([mk, pk, val])
        print(metrics.format_table(rows, ["measure", "pooling", "mean similarity"]))
    elif args.what == "consistency":
        by_annotator: dict[str, list] = {}
        for p in args.humans:
            traj, doc = solver.load_trajectory(p)
            ann = doc.get("annotator_id") or Path(p).stem.split("__")[0]
            if isinstance(traj, solver.DiscreteTrajectory):
                traj = solver.interpolate(traj, cfg.compare_fps, cfg.interval_seconds)
            by_annotator.setdefault(str(ann), []).append(metrics.resample(traj, cfg.compare_fps))
        report = metrics.consistency_report(by_annotator)
        rows = [[mk, pk, report[mk][pk]] for mk in ("cosine", "overlap") for pk in ("trajectory", "frame")]
        print(metrics.format_table(rows, ["measure", "pooling", "mean similarity"]))
    elif args.what == "distinguish":
        gen = load_feature_set(args.gen)
        human = load_feature_set(args.human)
        err = metrics.distinguishability(gen, human, folds=cfg.folds, seed=args.seed,
                                         C=cfg.regularization_c)
        report = {"error_rate": err}
        print(f"distinguishability error rate: {err:.4f} (higher is better)")
    elif args.what == "likeness":
        human = load_feature_set(args.human)
        per_method = {}
        for spec in args.method:
            name, _, path = spec.partition("=")
            if not path:
                raise ValueError(f"--method wants NAME=FILE, got {spec!r}")
            per_method[name] = load_feature_set(path)
        report = metrics.humancam_likeness(per_method, human, C=cfg.regularization_c)
        rows = sorted(report.items(), key=lambda kv: kv[1])
        print(metrics.format_table([[k, v] for k, v in rows], ["method", "mean rank (lower=better)"]))
    else:  # transfer
        source = load_feature_set(args.source)
        target = load_feature_set(args.target)
        acc = metrics.transferability(source, target, C=cfg.regularization_c)
        report = {"accuracy": acc}
        print(f"transfer accuracy: {acc:.4f}")
    if args.out:
        _write_json(args.out, report)
    return 0


def _cmd_analyze_scores(args, cfg) -> int:
    maps = [_load_grid_from_score_file(p, cfg) for p in args.scores]
    report = scoring.analyze_scores(maps, hi=cfg.hi, lo=cfg.lo)
    if args.out:
        _write_json(args.out, report)
    lat = report["by_latitude"]
    rows = [
        [lat["latitudes"][i], lat["capture_worthy"][i], lat["non_capture_worthy"][i]]
        for i in range(len(lat["latitudes"]))
    ]
    print(metrics.format_table(rows, ["latitude", "capture-worthy", "non-capture-worthy"]))
    return 0


def _cmd_serve(args, cfg) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(Path(args.videos), Path(args.out), camera=cfg.camera())
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="panocam", description=__doc__)
    p.add_argument("--config", help="JSON config file; flags override its fields")
    p.add_argument("--epsilon", type=float, help="motion limit per step, degrees")
    p.add_argument("--k", type=int, help="number of trajectories per method")
    p.add_argument("--interval-seconds", type=float, dest="interval_seconds")
    p.add_argument("--sigma", type=float, help="center-baseline step std, degrees")
    p.add_argument("--temperature", type=float, help="no-stitch softmax temperature")
    p.add_argument("--compare-fps", type=float, dest="compare_fps")
    p.add_argument("--hfov", type=float)
    p.add_argument("--camera-width", type=int, dest="camera_width")
    p.add_argument("--camera-height", type=int, dest="camera_height")
    p.add_argument("--folds", type=int)
    p.add_argument("--hi", type=float, help="capture-worthy threshold")
    p.add_argument("--lo", type=float, help="non-capture-worthy threshold")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("grid", help="lay the glimpse lattice over a video duration")
    sp.add_argument("--duration", type=float, required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_grid)

    sp = sub.add_parser("score", help="produce a capture-worthiness score map")
    sp.add_argument("mode", choices=["file", "standin", "model"])
    sp.add_argument("--in", dest="infile", help="score file to ingest (mode=file)")
    sp.add_argument("--frames", help="equirect frames directory (mode=standin)")
    sp.add_argument("--model", help="worthiness model file (mode=model)")
    sp.add_argument("--features", help="glimpse feature file (mode=model)")
    sp.add_argument("--num-steps", type=int, help="lattice steps (mode=model)")
    sp.add_argument("--video-id", default="")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_score)

    sp = sub.add_parser("train", help="train the capture-worthiness classifier")
    sp.add_argument("--humancam", required=True)
    sp.add_argument("--glimpses", required=True)
    sp.add_argument("--heldout", required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_train)

    sp = sub.add_parser("solve", help="top-K smooth trajectories from a score map")
    sp.add_argument("--scores", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_solve)

    sp = sub.add_parser("baseline", help="generate baseline trajectories")
    sp.add_argument("kind", choices=["center", "eyelevel", "nostitch"])
    sp.add_argument("--duration", type=float, help="video duration (center/eyelevel)")
    sp.add_argument("--scores", help="score map file (nostitch)")
    sp.add_argument("--seed", type=int, help="required for center and nostitch")
    sp.add_argument("--video-id", default="")
    sp.add_argument("--raw-out", help="also write center's pre-snap continuous walks")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_baseline)

    sp = sub.add_parser("interp", help="interpolate discrete trajectories to per-frame")
    sp.add_argument("--traj", required=True)
    sp.add_argument("--fps", type=float, required=True)
    sp.add_argument("--single", action="store_true", help="write bare trajectory when input has one")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_interp)

    sp = sub.add_parser("render", help="render the virtual camera's video")
    sp.add_argument("--frames", required=True)
    sp.add_argument("--traj", required=True)
    sp.add_argument("--index", type=int, default=0, help="trajectory index within a set file")
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=_cmd_render)

    sp = sub.add_parser("eval", help="evaluation metrics")
    sp.add_argument("what", choices=["humanedit", "consistency", "distinguish", "likeness", "transfer"])
    sp.add_argument("--gen", help="trajectory set (humanedit) or feature file (distinguish)")
    sp.add_argument("--humans", nargs="+", help="human trajectory files (humanedit/consistency)")
    sp.add_argument("--human", help="human feature file (distinguish/likeness)")
    sp.add_argument("--method", action="append", default=[], help="NAME=FEATURE_FILE (likeness)")
    sp.add_argument("--source", help="source feature file (transfer)")
    sp.add_argument("--target", help="target feature file (transfer)")
    sp.add_argument("--seed", type=int, help="required for distinguish")
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_eval)

    sp = sub.add_parser("analyze-scores", help="score distribution report")
    sp.add_argument("--scores", nargs="+", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=_cmd_analyze_scores)

    sp = sub.add_parser("serve", help="run the annotation backend")
    sp.add_argument("--videos", required=True, help="directory of per-video frame folders")
    sp.add_argument("--out", required=True, help="directory for finalized trajectories")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8008)
    sp.set_defaults(func=_cmd_serve)
    return p


_NEEDS_SEED = {
    ("train", None),
    ("baseline", "center"),
    ("baseline", "nostitch"),
    ("eval", "distinguish"),
}


def _seed_check(args) -> None:
    variant = getattr(args, "kind", None) or getattr(args, "what", None)
    for cmd, var in _NEEDS_SEED:
        if args.command == cmd and (var is None or var == variant):
            if getattr(args, "seed", None) is None:
                raise ValueError(f"{args.command} {variant or ''} is randomized and requires --seed")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    override_keys = (
        "epsilon", "k", "interval_seconds", "sigma", "temperature",
        "compare_fps", "hfov", "camera_width", "camera_height", "folds",
        "hi", "lo",
    )
    overrides = {key: getattr(args, key, None) for key in override_keys}
    try:
        cfg = load_config(args.config, overrides)
        _seed_check(args)
        return args.func(args, cfg)
    except (ValueError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
