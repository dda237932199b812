"""The trajectory annotation service, driven by a scripted client.

Starts the backend on a local port, registers a synthetic video, plays the
part of the browser interface (create a session, stream timestamped
direction samples, finalize), and validates the persisted trajectory by
replaying it through the metric suite.
"""

import tempfile
import threading
import time
from pathlib import Path

import numpy as np
import requests
import uvicorn

from panocam import SimilarityMeasure, load_trajectory, pool, save_frames
from panocam.server import create_app

root = Path(tempfile.mkdtemp(prefix="panocam_demo_"))
rng = np.random.default_rng(0)
frames = [(rng.random((16, 32)) * 255).astype(np.uint8) for _ in range(24)]
save_frames(root / "videos" / "shark_cage", frames, fps=2.0)  # 12 s video

app = create_app(root / "videos", root / "trajectories")
server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=8031, log_level="error"))
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.02)

base = "http://127.0.0.1:8031"
print("videos:", requests.get(f"{base}/videos").json())

sid = requests.post(f"{base}/sessions", json={
    "video_id": "shark_cage", "annotator_id": "demo",
    "center_longitude": -30.0, "pass_index": 1,
}).json()["session_id"]
print("session:", sid)

# The interface streams one sample per rendered frame; here: a smooth pan
# across the longitude seam while bobbing in latitude, 30 samples/second.
ts = np.arange(0.0, 12.0, 1.0 / 30.0)
samples = [
    {"timestamp": float(t), "theta": float(12 * np.sin(0.8 * t)),
     "phi": float((330.0 + 9.0 * t) % 360.0)}
    for t in ts
]
for k in range(0, len(samples), 90):  # batched posts, like the UI
    requests.post(f"{base}/sessions/{sid}/samples", json={"samples": samples[k : k + 90]})

outline = requests.get(f"{base}/fov_outline", params={
    "theta": 0, "phi": 350, "eq_width": 720, "eq_height": 360,
}).json()
print("fov outline segments near the seam:", len(outline["segments"]))

done = requests.post(f"{base}/sessions/{sid}/finalize", json={"fps": 2.0}).json()
print("finalized:", done)

traj, doc = load_trajectory(done["path"])
self_sim = pool(traj, [traj], SimilarityMeasure("cosine"), "trajectory")
print(f"persisted {traj.num_frames} frames by {doc['annotator_id']}; "
      f"self-similarity through the metrics: {self_sim}")

server.should_exit = True
thread.join(timeout=5)
