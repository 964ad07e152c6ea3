"""Discrete differential geometry of sampled track centerlines.

Centerlines are ordered point samples. Derivatives are finite differences
over the sample index, which is enough for curvature because the discrete
curvature formulas are invariant under uniform reparameterization.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

# Relative deviation allowed between consecutive gaps and the nominal spacing.
GAP_TOLERANCE = 0.01

# A first-derivative magnitude below this is treated as degenerate sampling.
DEGENERATE_SQ_NORM = 1e-12


class Point2D(NamedTuple):
    x: float
    y: float


class Point3D(NamedTuple):
    x: float
    y: float
    z: float


def _as_xy(points) -> np.ndarray:
    xy = np.ascontiguousarray(np.asarray(points, dtype=float))
    if xy.ndim != 2 or xy.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) point array, got shape {xy.shape}")
    return xy


def step_lengths(coords: np.ndarray) -> np.ndarray:
    """Per-point step distances; entry 0 is 0, entry k is |p_k - p_{k-1}|."""
    d = np.zeros(len(coords))
    if len(coords) > 1:
        sq = np.sum(np.diff(coords, axis=0) ** 2, axis=1)
        d[1:] = np.sqrt(sq)
    return d


@dataclass(frozen=True)
class Polyline2D:
    """Ordered planar centerline samples.

    ``spacing`` is the nominal arc-length gap between consecutive samples.
    It is set by :func:`resample_uniform`; raw (unresampled) polylines carry
    ``spacing=None`` and skip the uniform-gap check.
    """

    xy: np.ndarray
    spacing: float | None = None

    def __post_init__(self):
        xy = _as_xy(self.xy)
        if len(xy) < 3:
            raise ValueError(f"a polyline needs at least 3 points, got {len(xy)}")
        if not np.isfinite(xy).all():
            raise ValueError("polyline coordinates must be finite")
        steps = step_lengths(xy)
        zero = np.nonzero(steps[1:] == 0.0)[0]
        if zero.size:
            raise ValueError(f"duplicate consecutive point at index {int(zero[0]) + 1}")
        if self.spacing is not None:
            if self.spacing <= 0:
                raise ValueError(f"spacing must be positive, got {self.spacing}")
            rel = np.abs(steps[1:] - self.spacing) / self.spacing
            worst = int(np.argmax(rel))
            if rel[worst] > GAP_TOLERANCE:
                raise ValueError(
                    f"gap at index {worst + 1} deviates {rel[worst]:.2%} from "
                    f"spacing {self.spacing:g} (max allowed {GAP_TOLERANCE:.0%})"
                )
        object.__setattr__(self, "xy", xy)

    @property
    def n(self) -> int:
        return len(self.xy)

    @property
    def x(self) -> np.ndarray:
        return self.xy[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.xy[:, 1]

    def points(self) -> list[Point2D]:
        return [Point2D(float(px), float(py)) for px, py in self.xy]


@dataclass(frozen=True)
class Polyline3D:
    """Spatial centerline; x and y stay identical to the generating 2D line."""

    xyz: np.ndarray
    spacing: float | None = None

    def __post_init__(self):
        xyz = np.ascontiguousarray(np.asarray(self.xyz, dtype=float))
        if xyz.ndim != 2 or xyz.shape[1] != 3:
            raise ValueError(f"expected an (n, 3) point array, got shape {xyz.shape}")
        if len(xyz) < 3:
            raise ValueError(f"a polyline needs at least 3 points, got {len(xyz)}")
        if not np.isfinite(xyz).all():
            raise ValueError("polyline coordinates must be finite")
        object.__setattr__(self, "xyz", xyz)

    @property
    def n(self) -> int:
        return len(self.xyz)

    @property
    def x(self) -> np.ndarray:
        return self.xyz[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.xyz[:, 1]

    @property
    def z(self) -> np.ndarray:
        return self.xyz[:, 2]

    def xy_projection(self) -> Polyline2D:
        return Polyline2D(self.xyz[:, :2], spacing=self.spacing)

    def points(self) -> list[Point3D]:
        return [Point3D(float(px), float(py), float(pz)) for px, py, pz in self.xyz]


@dataclass(frozen=True)
class CurvatureProfile:
    """One curvature value (1/m) per polyline point."""

    values: np.ndarray

    def __post_init__(self):
        values = np.ascontiguousarray(np.asarray(self.values, dtype=float))
        if values.ndim != 1:
            raise ValueError("curvature profile must be one-dimensional")
        if not np.isfinite(values).all() or (values < 0).any():
            raise ValueError("curvature values must be finite and non-negative")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)


def resample_uniform(raw, spacing: float) -> Polyline2D:
    """Resample a polyline to (near) equal arc-length gaps.

    The realized gap is the total arc length divided by ``round(total /
    spacing)`` so that the first and last input points are preserved exactly.
    The returned polyline stores that realized gap as its ``spacing``.

    ``raw`` may be a :class:`Polyline2D` or any (n, 2) point sequence with at
    least two points. The spacing must resolve the input's curvature: on
    tight curves the chord between samples falls short of the arc, and a gap
    more than 1% off the nominal spacing is rejected.
    """
    xy = raw.xy if isinstance(raw, Polyline2D) else _as_xy(raw)
    if len(xy) < 2:
        raise ValueError(f"need at least 2 points to resample, got {len(xy)}")
    if spacing <= 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    s = np.cumsum(step_lengths(xy))
    total = s[-1]
    if spacing > total / 2:
        raise ValueError(
            f"spacing {spacing:g} exceeds half the arc length {total:g}"
        )
    nsteps = int(round(total / spacing))
    targets = np.linspace(0.0, total, nsteps + 1)
    resampled = np.column_stack(
        [np.interp(targets, s, xy[:, 0]), np.interp(targets, s, xy[:, 1])]
    )
    # Endpoints of the input are kept bit-exactly.
    resampled[0] = xy[0]
    resampled[-1] = xy[-1]
    return Polyline2D(resampled, spacing=total / nsteps)


def first_second_differences(
    series: Sequence[float], spacing: float
) -> tuple[np.ndarray, np.ndarray]:
    """Finite-difference first and second derivatives of a sampled series.

    Interior points use central differences; the two boundary points use
    one-sided stencils of matching (second) accuracy order.
    """
    y = np.asarray(series, dtype=float)
    if y.ndim != 1 or len(y) < 3:
        raise ValueError("series must be one-dimensional with at least 3 values")
    if spacing <= 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    u, v = _index_derivatives(y[:, None])
    return u[:, 0] / spacing, v[:, 0] / spacing**2


def _index_derivatives(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Columnwise first/second differences of (n, d) samples at unit step."""
    n = len(p)
    u = np.empty_like(p)
    v = np.empty_like(p)
    u[1:-1] = (p[2:] - p[:-2]) * 0.5
    u[0] = (-3.0 * p[0] + 4.0 * p[1] - p[2]) * 0.5
    u[-1] = (3.0 * p[-1] - 4.0 * p[-2] + p[-3]) * 0.5
    v[1:-1] = p[2:] - 2.0 * p[1:-1] + p[:-2]
    if n >= 4:
        v[0] = 2.0 * p[0] - 5.0 * p[1] + 4.0 * p[2] - p[3]
        v[-1] = 2.0 * p[-1] - 5.0 * p[-2] + 4.0 * p[-3] - p[-4]
    else:
        v[0] = p[0] - 2.0 * p[1] + p[2]
        v[-1] = v[0]
    return u, v


def curvature_2d(line: Polyline2D) -> CurvatureProfile:
    """Planar curvature |x''y' - x'y''| / (x'^2 + y'^2)^(3/2) per point."""
    u, v = _index_derivatives(line.xy)
    sq = u[:, 0] ** 2 + u[:, 1] ** 2
    bad = np.nonzero(sq < DEGENERATE_SQ_NORM)[0]
    if bad.size:
        raise ValueError(f"degenerate first derivative at point index {int(bad[0])}")
    num = np.abs(v[:, 0] * u[:, 1] - u[:, 0] * v[:, 1])
    norm = np.sqrt(sq)
    return CurvatureProfile(num / (norm * norm * norm))


def curvature_3d(line: Polyline3D) -> CurvatureProfile:
    """Space-curve curvature sqrt(|u|^2 |v|^2 - (u.v)^2) / |u|^3 per point.

    u and v are the first and second derivative vectors of the coordinates.
    """
    u, v = _index_derivatives(line.xyz)
    uu = np.einsum("ij,ij->i", u, u)
    bad = np.nonzero(uu < DEGENERATE_SQ_NORM)[0]
    if bad.size:
        raise ValueError(f"vanishing first derivative at point index {int(bad[0])}")
    vv = np.einsum("ij,ij->i", v, v)
    uv = np.einsum("ij,ij->i", u, v)
    num = np.sqrt(np.maximum(uu * vv - uv * uv, 0.0))
    norm = np.sqrt(uu)
    return CurvatureProfile(num / (norm * norm * norm))


def planar_step(prev: Point2D, curr: Point2D) -> float:
    """Planar distance between two consecutive points."""
    dx = curr[0] - prev[0]
    dy = curr[1] - prev[1]
    return float(np.sqrt(dx * dx + dy * dy))


def spatial_step(prev: Point3D, curr: Point3D) -> float:
    """3D distance between two consecutive points.

    The sum of squares reuses the planar part, so the result is never below
    the planar step of the xy projections, including in floating point.
    """
    dx = curr[0] - prev[0]
    dy = curr[1] - prev[1]
    dz = curr[2] - prev[2]
    return float(np.sqrt(dx * dx + dy * dy + dz * dz))


def total_length_3d(line: Polyline3D) -> float:
    """Sum of the 3D step distances along the polyline."""
    if line.n < 2:
        raise ValueError("need at least 2 points for a length")
    return float(np.sum(step_lengths(line.xyz)))


def scale_xy(line: Polyline2D, f: float) -> Polyline2D:
    """Uniform, origin-anchored scaling of the planar coordinates."""
    if f <= 0:
        raise ValueError(f"scale factor must be positive, got {f}")
    spacing = None if line.spacing is None else line.spacing * f
    return Polyline2D(line.xy * f, spacing=spacing)
