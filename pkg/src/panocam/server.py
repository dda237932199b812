"""Trajectory annotation backend.

Serves panoramic frames and backprojected FOV outlines to the browser
interface, receives batches of (timestamp, direction) samples recorded
while an annotator steers the virtual camera, and persists finalized
trajectories in the standard file format.

Videos live under one root directory, one folder per video id, each with
numbered PNG frames and a metadata sidecar. Each annotator records two
passes per video; sessions are keyed by (video, annotator, pass) and
mutated only by their own requests, serialized per session. Finalized files
are written via write-then-rename so a crash never leaves a corrupt file.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse
from pydantic import BaseModel

from .render import FRAME_PATTERN, load_frame_metadata
from .solver import ContinuousTrajectory, save_trajectory
from .sphere import CameraModel, Direction, fov_outline, signed_longitude_delta

__all__ = ["AnnotationSession", "create_app"]


@dataclass
class AnnotationSession:
    """One annotation pass: identity, chosen display center, sample buffer."""

    session_id: str
    video_id: str
    annotator_id: str
    center_longitude: float
    pass_index: int
    samples: list[tuple[float, float, float]] = field(default_factory=list)
    closed: bool = False
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class SessionRequest(BaseModel):
    video_id: str
    annotator_id: str
    center_longitude: float = 0.0
    pass_index: int = 1


class Sample(BaseModel):
    timestamp: float
    theta: float
    phi: float


class SampleBatch(BaseModel):
    samples: list[Sample]


class FinalizeRequest(BaseModel):
    fps: float


def _resample_to_fps(samples, fps: float, duration: float) -> ContinuousTrajectory:
    """Linear interpolation of the sample buffer at frame-center times,
    longitude along the shorter wrap direction, ends held constant."""
    ts = np.array([s[0] for s in samples])
    thetas = np.array([s[1] for s in samples])
    phis = np.array([s[2] for s in samples])
    unwrapped = np.concatenate(
        [[phis[0]], phis[0] + np.cumsum(signed_longitude_delta(phis[:-1], phis[1:]))]
    )
    n = max(1, round(duration * fps))
    frame_t = (np.arange(n) + 0.5) / fps
    return ContinuousTrajectory(
        fps=fps,
        thetas=np.interp(frame_t, ts, thetas),
        phis=np.interp(frame_t, ts, unwrapped) % 360.0,
    )


def create_app(video_root: Path, output_dir: Path, camera: CameraModel | None = None) -> FastAPI:
    video_root = Path(video_root)
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    camera = camera or CameraModel()

    app = FastAPI(title="panocam annotation backend")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    sessions: dict[str, AnnotationSession] = {}
    session_keys: set[tuple[str, str, int]] = set()
    registry_lock = threading.Lock()

    def _video_meta(video_id: str) -> dict:
        directory = video_root / video_id
        if not (directory / "metadata.json").exists():
            raise HTTPException(404, f"unknown video {video_id!r}")
        return load_frame_metadata(directory)

    def _session(session_id: str) -> AnnotationSession:
        sess = sessions.get(session_id)
        if sess is None:
            raise HTTPException(404, f"unknown session {session_id!r}")
        return sess

    @app.get("/videos")
    def list_videos():
        ids = sorted(
            d.name for d in video_root.iterdir()
            if d.is_dir() and (d / "metadata.json").exists()
        ) if video_root.exists() else []
        return {"videos": ids}

    @app.get("/videos/{video_id}")
    def video_metadata(video_id: str):
        meta = _video_meta(video_id)
        meta["duration"] = meta["num_frames"] / meta["fps"]
        return meta

    @app.get("/videos/{video_id}/frames/{index}")
    def video_frame(video_id: str, index: int):
        meta = _video_meta(video_id)
        if not 0 <= index < meta["num_frames"]:
            raise HTTPException(404, f"frame {index} outside 0..{meta['num_frames'] - 1}")
        return FileResponse(video_root / video_id / FRAME_PATTERN.format(index), media_type="image/png")

    @app.get("/fov_outline")
    def outline(theta: float, phi: float, eq_width: int, eq_height: int,
                samples_per_edge: int = 16):
        try:
            principal = Direction(theta, phi)
            segments = fov_outline(camera, principal, eq_width, eq_height, samples_per_edge)
        except ValueError as exc:
            raise HTTPException(400, str(exc))
        return {"segments": [seg.tolist() for seg in segments]}

    @app.post("/sessions", status_code=201)
    def create_session(req: SessionRequest):
        _video_meta(req.video_id)
        if req.pass_index not in (1, 2):
            raise HTTPException(400, "pass_index must be 1 or 2 (two passes per annotator)")
        key = (req.video_id, req.annotator_id, req.pass_index)
        with registry_lock:
            if key in session_keys:
                raise HTTPException(
                    409, f"pass {req.pass_index} of {req.annotator_id!r} on "
                         f"{req.video_id!r} already exists"
                )
            session_keys.add(key)
            sid = uuid.uuid4().hex
            sessions[sid] = AnnotationSession(
                session_id=sid,
                video_id=req.video_id,
                annotator_id=req.annotator_id,
                center_longitude=req.center_longitude % 360.0,
                pass_index=req.pass_index,
            )
        return {"session_id": sid, "center_longitude": sessions[sid].center_longitude}

    @app.get("/sessions/{session_id}")
    def session_state(session_id: str):
        sess = _session(session_id)
        with sess.lock:
            return {
                "session_id": sess.session_id,
                "video_id": sess.video_id,
                "annotator_id": sess.annotator_id,
                "center_longitude": sess.center_longitude,
                "pass_index": sess.pass_index,
                "num_samples": len(sess.samples),
                "closed": sess.closed,
            }

    @app.post("/sessions/{session_id}/samples")
    def record_samples(session_id: str, batch: SampleBatch):
        sess = _session(session_id)
        if not batch.samples:
            raise HTTPException(400, "empty batch")
        for s in batch.samples:
            if not -90.0 <= s.theta <= 90.0:
                raise HTTPException(400, f"invalid direction: theta={s.theta}")
        with sess.lock:
            if sess.closed:
                raise HTTPException(409, "session already finalized")
            last = sess.samples[-1][0] if sess.samples else -np.inf
            for s in batch.samples:
                if s.timestamp <= last:
                    raise HTTPException(
                        400, f"non-monotonic timestamp {s.timestamp} (after {last}); "
                             "batch rejected"
                    )
                last = s.timestamp
            sess.samples.extend((s.timestamp, s.theta, s.phi % 360.0) for s in batch.samples)
            return {"accepted": len(batch.samples), "total": len(sess.samples)}

    @app.post("/sessions/{session_id}/finalize")
    def finalize(session_id: str, req: FinalizeRequest):
        sess = _session(session_id)
        if req.fps <= 0:
            raise HTTPException(400, "fps must be positive")
        meta = _video_meta(sess.video_id)
        duration = meta["num_frames"] / meta["fps"]
        with sess.lock:
            if sess.closed:
                raise HTTPException(409, "session already finalized")
            if len(sess.samples) < 2:
                raise HTTPException(400, "need at least two samples")
            first, last = sess.samples[0][0], sess.samples[-1][0]
            if first > 1.0 or last < duration - 1.0:
                raise HTTPException(
                    400, f"samples cover {first:.2f}..{last:.2f}s but the video "
                         f"runs 0..{duration:.2f}s (1s tolerance at each end)"
                )
            traj = _resample_to_fps(sess.samples, req.fps, duration)
            path = output_dir / (
                f"{sess.video_id}__{sess.annotator_id}__pass{sess.pass_index}.json"
            )
            save_trajectory(
                path, traj, video_id=sess.video_id,
                extra={"annotator_id": sess.annotator_id, "pass_index": sess.pass_index,
                       "center_longitude": sess.center_longitude},
            )
            sess.closed = True
        return {"path": str(path), "num_frames": traj.num_frames, "video_id": sess.video_id}

    return app
