"""Elevation assignment by projected gradient descent.

The decision variables are per-segment height differences (positive means
the track drops). The cost penalizes the absolute residuals of total 3D
length, total height variation, planar-versus-spatial curvature agreement
and mean segment slope against the design targets. Gradients are secant
estimates from the cost change between successive iterates, applied
componentwise, and every update is followed by clamping each segment's
slope into the allowed range.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import _backend
from .geometry import (
    CurvatureProfile,
    Polyline2D,
    Polyline3D,
    curvature_2d,
    curvature_3d,
    scale_xy,
    step_lengths,
)
from .segmentation import SegmentPartition

# Slope factors below this are meaningless; updates that cross zero clamp here.
MIN_SCALE = 1e-3


@dataclass(frozen=True)
class TrackTargets:
    """Design targets: lengths in meters, slopes dimensionless."""

    total_length: float
    height_difference: float
    average_slope: float
    slope_min: float = 0.0
    slope_max: float = 0.204

    def __post_init__(self):
        if self.total_length <= 0:
            raise ValueError("total_length must be positive")
        if self.height_difference <= 0:
            raise ValueError("height_difference must be positive")
        if self.slope_min >= self.slope_max:
            raise ValueError("slope_min must be below slope_max")
        if not self.slope_min <= self.average_slope <= self.slope_max:
            raise ValueError("average_slope must lie within the slope bounds")


@dataclass(frozen=True)
class CostWeights:
    a: float = 1.0
    b: float = 0.7
    c: float = 1.0
    d: float = 1.0

    def __post_init__(self):
        w = (self.a, self.b, self.c, self.d)
        if any(v < 0 for v in w):
            raise ValueError("weights must be non-negative")
        if all(v == 0 for v in w):
            raise ValueError("at least one weight must be positive")


@dataclass(frozen=True)
class OptimizerConfig:
    learning_rate: float = 1e-5
    convergence_threshold: float = 1e-3
    max_iterations: int = 100_000
    seed: int = 0
    secant_epsilon: float = 1e-9

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.convergence_threshold <= 0:
            raise ValueError("convergence_threshold must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.secant_epsilon <= 0:
            raise ValueError("secant_epsilon must be positive")


@dataclass
class OptimizerState:
    """Iterate of the descent: current heights plus the previous step's data."""

    heights: np.ndarray
    prev_heights: np.ndarray
    prev_cost: float
    iteration: int = 0
    scale: float | None = None
    prev_scale: float | None = None


@dataclass(frozen=True)
class CostBreakdown:
    """Weighted residual terms; ``total`` is their sum."""

    length_term: float
    height_term: float
    curvature_term: float
    slope_term: float
    total: float


@dataclass(frozen=True)
class RunResult:
    centerline: Polyline3D
    final_state: OptimizerState
    cost_history: list[float]
    iterations: int
    converged: bool
    recovered_scale: float | None = None
    scale_clamped: bool = False


def _proportional_heights(part: SegmentPartition, height_difference: float) -> np.ndarray:
    """Split the total drop across segments proportionally to planar length."""
    d = part.planar_lengths
    return height_difference * d / float(np.sum(d))


def _snap_into_bounds(
    h: np.ndarray, d: np.ndarray, gmin: float, gmax: float
) -> np.ndarray:
    """Nudge heights so h/d lands inside [gmin, gmax] exactly, in floats."""
    over = h / d > gmax
    while over.any():
        h[over] = np.nextafter(h[over], -np.inf)
        over = h / d > gmax
    under = h / d < gmin
    while under.any():
        h[under] = np.nextafter(h[under], np.inf)
        under = h / d < gmin
    return h


def _project(
    heights: np.ndarray, d: np.ndarray, gmin: float, gmax: float
) -> np.ndarray:
    g = heights / d
    out = heights.copy()
    low = g <= gmin
    high = g >= gmax
    out[low] = gmin * d[low]
    out[high] = gmax * d[high]
    return _snap_into_bounds(out, d, gmin, gmax)


def project_heights(
    heights, part: SegmentPartition, targets: TrackTargets
) -> np.ndarray:
    """Clamp each segment's implied slope into the allowed range.

    Idempotent, and the identity on height vectors whose slopes are already
    strictly inside the bounds.
    """
    h = np.asarray(heights, dtype=float)
    if len(h) != part.segment_count:
        raise ValueError("heights length must equal the segment count")
    return _project(h, part.planar_lengths, targets.slope_min, targets.slope_max)


def _init_heights(
    part: SegmentPartition,
    targets: TrackTargets,
    rng: np.random.Generator,
    length_scale: float = 1.0,
) -> np.ndarray:
    base = _proportional_heights(part, targets.height_difference)
    u = rng.uniform(-0.2, 0.2, part.segment_count)
    return _project(
        base * (1.0 + u),
        length_scale * part.planar_lengths,
        targets.slope_min,
        targets.slope_max,
    )


def init_heights(part: SegmentPartition, targets: TrackTargets, seed: int) -> np.ndarray:
    """Deterministic starting heights: proportional split, perturbed +-20%,
    then projected into the slope bounds."""
    return _init_heights(part, targets, np.random.default_rng(seed))


def slopes_from_heights(heights, part: SegmentPartition) -> np.ndarray:
    """Per-segment slope h_m / d_m."""
    h = np.asarray(heights, dtype=float)
    if len(h) != part.segment_count:
        raise ValueError("heights length must equal the segment count")
    return h / part.planar_lengths


def reconstruct_elevation(
    line: Polyline2D, part: SegmentPartition, heights, height_difference: float
) -> Polyline3D:
    """Rebuild z from per-segment heights; the track starts at the full drop.

    Within segment m every step descends at slope h_m / d_m, so the last
    point ends at ``height_difference - sum(heights)``.
    """
    h = np.asarray(heights, dtype=float)
    if len(h) != part.segment_count:
        raise ValueError("heights length must equal the segment count")
    if line.n != part.point_count:
        raise ValueError("partition does not match the polyline")
    steps = step_lengths(line.xy)
    slopes = h / part.planar_lengths
    z = height_difference - np.cumsum(steps * slopes[part.point_segments()])
    return Polyline3D(np.column_stack((line.xy, z)), spacing=line.spacing)


def _segment_drops(z: np.ndarray, part: SegmentPartition) -> np.ndarray:
    drops = np.zeros(len(z))
    drops[1:] = z[:-1] - z[1:]
    bounds = part.starts
    return np.add.reduceat(drops, bounds)


def cost(
    line3d: Polyline3D,
    part: SegmentPartition,
    k2d: CurvatureProfile,
    targets: TrackTargets,
    weights: CostWeights,
) -> CostBreakdown:
    """Weighted absolute residuals of a 3D centerline against the targets.

    Terms: total 3D length vs the length target, total height variation vs
    the height target, mean pointwise difference between planar and spatial
    curvature, and the unweighted mean of per-segment slopes vs the average
    slope target.
    """
    n = line3d.n
    if part.point_count != n or len(k2d) != n:
        raise ValueError("partition and curvature profile must match the polyline")
    dz = np.diff(line3d.z)
    planar = step_lengths(line3d.xyz[:, :2])[1:]
    d3 = np.sqrt(planar * planar + dz * dz)
    length_term = weights.a * abs(targets.total_length - float(np.sum(d3)))
    height_term = weights.b * abs(
        targets.height_difference - float(np.sum(np.abs(dz)))
    )
    ks = curvature_3d(line3d)
    curvature_term = (weights.c / n) * float(np.sum(np.abs(k2d.values - ks.values)))
    g = _segment_drops(line3d.z, part) / part.planar_lengths
    slope_term = weights.d * abs(float(np.mean(g)) - targets.average_slope)
    total = length_term + height_term + curvature_term + slope_term
    return CostBreakdown(length_term, height_term, curvature_term, slope_term, total)


def secant_gradient(
    curr_heights, prev_heights, curr_cost: float, prev_cost: float, eps: float
) -> np.ndarray:
    """Componentwise cost-change quotient (J_i - J_{i-1}) / (h_i - h_{i-1}).

    Components that moved less than ``eps`` get gradient 0.
    """
    curr = np.asarray(curr_heights, dtype=float)
    prev = np.asarray(prev_heights, dtype=float)
    if curr.shape != prev.shape:
        raise ValueError("height vectors must have equal lengths")
    dh = curr - prev
    dj = curr_cost - prev_cost
    grad = np.zeros_like(dh)
    moved = np.abs(dh) >= eps
    grad[moved] = dj / dh[moved]
    return grad


def pgd_step(
    state: OptimizerState,
    grad,
    config: OptimizerConfig,
    part: SegmentPartition,
    targets: TrackTargets,
) -> OptimizerState:
    """One descent update: step along the gradient estimate, then project."""
    g = np.asarray(grad, dtype=float)
    if g.shape != state.heights.shape:
        raise ValueError("gradient length must equal the segment count")
    length_scale = 1.0 if state.scale is None else state.scale
    new_h = _project(
        state.heights - config.learning_rate * g,
        length_scale * part.planar_lengths,
        targets.slope_min,
        targets.slope_max,
    )
    return replace(
        state,
        heights=new_h,
        prev_heights=state.heights,
        iteration=state.iteration + 1,
    )


def _run_arrays(line: Polyline2D, part: SegmentPartition):
    if line.n != part.point_count:
        raise ValueError("partition does not match the polyline")
    return (
        np.ascontiguousarray(line.xy),
        step_lengths(line.xy),
        part.point_segments(),
        np.ascontiguousarray(part.planar_lengths),
        curvature_2d(line).values,
    )


def optimize(
    line: Polyline2D,
    part: SegmentPartition,
    targets: TrackTargets,
    weights: CostWeights,
    config: OptimizerConfig,
) -> RunResult:
    """Assign per-segment heights by projected secant-gradient descent.

    Starts from the seeded proportional heights, takes a first step along a
    random gradient (there is no secant history yet) and then iterates
    reconstruct / cost / secant gradient / projected update until the cost
    change drops below the convergence threshold or the iteration budget is
    exhausted. Identical inputs and seed give identical results.
    """
    xy, steps, pseg, dm, kp = _run_arrays(line, part)
    rng = np.random.default_rng(config.seed)
    eta = config.learning_rate

    def eval_cost(h):
        return _backend.evaluate(
            xy, steps, pseg, dm, kp, h, 1.0,
            targets.total_length, targets.height_difference,
            targets.average_slope,
            weights.a, weights.b, weights.c, weights.d,
        )

    h0 = _init_heights(part, targets, rng)
    j0, *_, z = eval_cost(h0)
    history = [j0]

    first_grad = rng.uniform(-1.0, 1.0, part.segment_count)
    state = OptimizerState(
        heights=_project(h0 - eta * first_grad, dm,
                         targets.slope_min, targets.slope_max),
        prev_heights=h0,
        prev_cost=j0,
        iteration=1,
    )

    converged = False
    while True:
        j, *_, z = eval_cost(state.heights)
        history.append(j)
        if abs(j - state.prev_cost) < config.convergence_threshold:
            converged = True
            break
        if state.iteration >= config.max_iterations:
            break
        grad = secant_gradient(
            state.heights, state.prev_heights, j, state.prev_cost,
            config.secant_epsilon,
        )
        state.prev_cost = j
        state = pgd_step(state, grad, config, part, targets)

    centerline = Polyline3D(np.column_stack((line.xy, z)), spacing=line.spacing)
    return RunResult(
        centerline=centerline,
        final_state=state,
        cost_history=history,
        iterations=state.iteration,
        converged=converged,
    )


def optimize_with_scale(
    line: Polyline2D,
    part: SegmentPartition,
    targets: TrackTargets,
    weights: CostWeights,
    config: OptimizerConfig,
    f_init: float = 1.0,
) -> RunResult:
    """Joint descent over heights and a uniform xy scale factor.

    Each iteration evaluates the cost with x, y, the step lengths and the
    segment lengths multiplied by the current factor (planar curvature scales
    inversely), then updates the factor by its own secant quotient and the
    heights as in :func:`optimize`. The returned centerline carries the
    recovered (rescaled) coordinates.
    """
    if f_init <= 0:
        raise ValueError(f"f_init must be positive, got {f_init}")
    xy, steps, pseg, dm, kp = _run_arrays(line, part)
    rng = np.random.default_rng(config.seed)
    eta = config.learning_rate
    gmin, gmax = targets.slope_min, targets.slope_max

    def eval_cost(h, f):
        return _backend.evaluate(
            xy, steps, pseg, dm, kp, h, f,
            targets.total_length, targets.height_difference,
            targets.average_slope,
            weights.a, weights.b, weights.c, weights.d,
        )

    h0 = _init_heights(part, targets, rng, length_scale=f_init)
    j0, *_, z = eval_cost(h0, f_init)
    history = [j0]

    first_grad = rng.uniform(-1.0, 1.0, part.segment_count)
    first_grad_f = float(rng.uniform(-1.0, 1.0))
    f1 = max(f_init - eta * first_grad_f, MIN_SCALE)
    state = OptimizerState(
        heights=_project(h0 - eta * first_grad, f1 * dm, gmin, gmax),
        prev_heights=h0,
        prev_cost=j0,
        iteration=1,
        scale=f1,
        prev_scale=f_init,
    )

    converged = False
    scale_clamped = False
    while True:
        j, *_, z = eval_cost(state.heights, state.scale)
        history.append(j)
        if abs(j - state.prev_cost) < config.convergence_threshold:
            converged = True
            break
        if state.iteration >= config.max_iterations:
            break
        grad = secant_gradient(
            state.heights, state.prev_heights, j, state.prev_cost,
            config.secant_epsilon,
        )
        df = state.scale - state.prev_scale
        grad_f = 0.0 if abs(df) < config.secant_epsilon else (j - state.prev_cost) / df
        new_f = state.scale - eta * grad_f
        if new_f <= 0:
            new_f = MIN_SCALE
            scale_clamped = True
        new_h = _project(state.heights - eta * grad, new_f * dm, gmin, gmax)
        state = OptimizerState(
            heights=new_h,
            prev_heights=state.heights,
            prev_cost=j,
            iteration=state.iteration + 1,
            scale=new_f,
            prev_scale=state.scale,
        )

    recovered = scale_xy(line, state.scale)
    centerline = Polyline3D(
        np.column_stack((recovered.xy, z)), spacing=recovered.spacing
    )
    return RunResult(
        centerline=centerline,
        final_state=state,
        cost_history=history,
        iterations=state.iteration,
        converged=converged,
        recovered_scale=state.scale,
        scale_clamped=scale_clamped,
    )
