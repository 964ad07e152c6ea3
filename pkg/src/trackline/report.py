"""Measured geometry of generated centerlines and comparisons against references."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .geometry import CurvatureProfile, Polyline3D, curvature_3d, step_lengths
from .optimizer import TrackTargets, _segment_drops
from .segmentation import SegmentPartition

# Measured slopes come from summed z-drops, so honoring the limits is checked
# with a small absolute margin against rounding noise.
SLOPE_LIMIT_MARGIN = 1e-9


@dataclass(frozen=True)
class GeometryReport:
    """Geometric parameters of one 3D centerline.

    ``height_difference`` is the net drop (first z minus last z) while
    ``height_variation`` sums all absolute z changes; the two coincide for
    monotonically descending tracks. ``average_slope`` is the unweighted mean
    of the per-segment slopes; ``overall_slope`` is net drop over length.
    """

    total_length: float
    height_difference: float
    height_variation: float
    max_slope: float
    average_slope: float
    overall_slope: float
    slope_within_limits: bool
    per_segment_slopes: tuple[float, ...]

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ComparisonReport:
    """Relative errors |generated - actual| / actual."""

    length_error: float
    height_error: float
    average_slope_error: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SeriesBundle:
    """Plot-ready per-point series indexed by cumulative 3D arc length."""

    arc_length: np.ndarray
    height: np.ndarray
    slope: np.ndarray
    curvature_2d: np.ndarray
    curvature_3d: np.ndarray


def geometry_report(
    line3d: Polyline3D, part: SegmentPartition, targets: TrackTargets
) -> GeometryReport:
    """Measure a 3D centerline's design parameters against the slope limits."""
    if part.point_count != line3d.n:
        raise ValueError("partition does not match the polyline")
    z = line3d.z
    total = float(np.sum(step_lengths(line3d.xyz)))
    net_drop = float(z[0] - z[-1])
    variation = float(np.sum(np.abs(np.diff(z))))
    slopes = _segment_drops(z, part) / part.planar_lengths
    within = bool(
        (slopes >= targets.slope_min - SLOPE_LIMIT_MARGIN).all()
        and (slopes <= targets.slope_max + SLOPE_LIMIT_MARGIN).all()
    )
    return GeometryReport(
        total_length=total,
        height_difference=net_drop,
        height_variation=variation,
        max_slope=float(np.max(slopes)),
        average_slope=float(np.mean(slopes)),
        overall_slope=net_drop / total,
        slope_within_limits=within,
        per_segment_slopes=tuple(float(g) for g in slopes),
    )


def compare_reports(
    generated: GeometryReport, actual: GeometryReport
) -> ComparisonReport:
    """Relative errors of the generated track against the reference track."""
    refs = (actual.total_length, actual.height_difference, actual.average_slope)
    if any(r <= 0 for r in refs):
        raise ValueError("reference values must be positive")
    return ComparisonReport(
        length_error=abs(generated.total_length - actual.total_length)
        / actual.total_length,
        height_error=abs(generated.height_difference - actual.height_difference)
        / actual.height_difference,
        average_slope_error=abs(generated.average_slope - actual.average_slope)
        / actual.average_slope,
    )


def export_series(
    line3d: Polyline3D, part: SegmentPartition, k2d: CurvatureProfile
) -> SeriesBundle:
    """Height, slope and curvature series along the cumulative 3D arc length.

    The slope series is piecewise constant: each point carries the slope of
    the segment that owns it.
    """
    n = line3d.n
    if part.point_count != n or len(k2d) != n:
        raise ValueError("partition and curvature profile must match the polyline")
    arc = np.cumsum(step_lengths(line3d.xyz))
    slopes = _segment_drops(line3d.z, part) / part.planar_lengths
    return SeriesBundle(
        arc_length=arc,
        height=line3d.z.copy(),
        slope=slopes[part.point_segments()],
        curvature_2d=k2d.values.copy(),
        curvature_3d=curvature_3d(line3d).values,
    )
