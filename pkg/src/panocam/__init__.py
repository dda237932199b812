"""panocam: virtual NFOV camera toolkit for 360-degree video.

Scores spatio-temporal glimpses for capture-worthiness, solves a
smooth-motion dynamic program for virtual camera trajectories, renders the
virtual camera's video, evaluates trajectories against human edits, and
hosts the trajectory annotation service.
"""

from .baselines import center_baseline, eye_level_baseline, no_stitch_sample
from .grid import (
    DEFAULT_LATITUDES,
    DEFAULT_LONGITUDES,
    GlimpseGrid,
    STGlimpse,
    build_grid,
    glimpse_clip,
)
from .metrics import (
    SimilarityMeasure,
    consistency_report,
    distinguishability,
    framewise_similarity,
    humancam_likeness,
    pool,
    resample,
    transferability,
)
from .render import RenderJob, load_frames, render_frame, render_video, save_frames
from .scoring import (
    FeatureSet,
    ScoreMap,
    WorthinessModel,
    analyze_scores,
    assemble_training_set,
    fit_logistic,
    load_feature_set,
    load_score_map,
    save_feature_set,
    save_score_map,
    score_glimpses,
    standin_score,
    train_worthiness,
)
from .solver import (
    ContinuousTrajectory,
    DiscreteTrajectory,
    interpolate,
    load_trajectory,
    load_trajectory_set,
    save_trajectory,
    save_trajectory_set,
    solve_topk,
)
from .sphere import (
    CameraModel,
    Direction,
    EquirectImage,
    angular_distance,
    equirect_px_to_direction,
    fov_outline,
    nfov_pixel_ray,
    nfov_project,
    sphere_to_equirect_px,
    wrapped_delta,
)

__version__ = "0.1.0"
