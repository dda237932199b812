"""Test helper: synthesize a small video, start the annotation backend, and
print READY with the trajectory output directory. Killed by the test runner."""

import sys
import tempfile
import threading
from pathlib import Path

import numpy as np
import uvicorn

from panocam import save_frames
from panocam.server import create_app

port = int(sys.argv[1])
root = Path(tempfile.mkdtemp(prefix="panocam_ui_test_"))
rng = np.random.default_rng(0)
frames = [(rng.random((16, 32)) * 255).astype(np.uint8) for _ in range(24)]
save_frames(root / "videos" / "testvid", frames, fps=2.0)  # 12 s video
out_dir = root / "trajectories"

app = create_app(root / "videos", out_dir)
server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=port, log_level="error"))
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    pass
print(f"READY {out_dir}", flush=True)
thread.join()
