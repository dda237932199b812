"""Test helper: validate a finalized trajectory file and print its
self-similarity computed by the metric suite."""

import sys

from panocam import SimilarityMeasure, load_trajectory, pool

traj, doc = load_trajectory(sys.argv[1])
assert doc["kind"] == "continuous"
assert doc["video_id"] and doc["annotator_id"]
assert [e["frame"] for e in sorted(doc["entries"], key=lambda e: e["frame"])] == list(
    range(traj.num_frames)
)
cos = pool(traj, [traj], SimilarityMeasure("cosine"), "trajectory")
over = pool(traj, [traj], SimilarityMeasure("overlap"), "frame")
print(f"SELF {cos} {over} {traj.num_frames}", flush=True)
