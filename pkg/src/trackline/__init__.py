"""Generation of 3D bobsleigh-track centerlines from sampled 2D centerlines."""

from ._backend import backend_name
from .geometry import (
    CurvatureProfile,
    Point2D,
    Point3D,
    Polyline2D,
    Polyline3D,
    curvature_2d,
    curvature_3d,
    first_second_differences,
    planar_step,
    resample_uniform,
    scale_xy,
    spatial_step,
    total_length_3d,
)
from .optimizer import (
    CostBreakdown,
    CostWeights,
    OptimizerConfig,
    OptimizerState,
    RunResult,
    TrackTargets,
    cost,
    init_heights,
    optimize,
    optimize_with_scale,
    pgd_step,
    project_heights,
    reconstruct_elevation,
    secant_gradient,
    slopes_from_heights,
)
from .report import (
    ComparisonReport,
    GeometryReport,
    SeriesBundle,
    compare_reports,
    export_series,
    geometry_report,
)
from .segmentation import (
    CURVED,
    STRAIGHT,
    SegmentPartition,
    SegmentationConfig,
    adjust_partition_count,
    build_partition,
    classify_points,
    smooth_labels,
)
from .synth import Arc, Line, SynthRecipe, synth_track

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "CURVED",
    "ComparisonReport",
    "CostBreakdown",
    "CostWeights",
    "CurvatureProfile",
    "GeometryReport",
    "Line",
    "OptimizerConfig",
    "OptimizerState",
    "Point2D",
    "Point3D",
    "Polyline2D",
    "Polyline3D",
    "RunResult",
    "STRAIGHT",
    "SegmentPartition",
    "SegmentationConfig",
    "SeriesBundle",
    "SynthRecipe",
    "TrackTargets",
    "adjust_partition_count",
    "backend_name",
    "build_partition",
    "classify_points",
    "compare_reports",
    "cost",
    "curvature_2d",
    "curvature_3d",
    "export_series",
    "first_second_differences",
    "geometry_report",
    "init_heights",
    "optimize",
    "optimize_with_scale",
    "pgd_step",
    "planar_step",
    "project_heights",
    "reconstruct_elevation",
    "resample_uniform",
    "scale_xy",
    "secant_gradient",
    "slopes_from_heights",
    "smooth_labels",
    "spatial_step",
    "synth_track",
    "total_length_3d",
]
