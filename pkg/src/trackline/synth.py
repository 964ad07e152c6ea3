"""Synthetic centerline recipes built from tangent-continuous lines and arcs."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Polyline2D, Polyline3D, step_lengths


@dataclass(frozen=True)
class Line:
    """Straight primitive; ``slope`` is the optional ground-truth drop rate."""

    length: float
    slope: float | None = None

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError("line length must be positive")


@dataclass(frozen=True)
class Arc:
    """Circular primitive; positive sweep turns left, negative right."""

    radius: float
    sweep: float
    slope: float | None = None

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("arc radius must be positive")
        if self.sweep == 0:
            raise ValueError("arc sweep must be non-zero")

    @property
    def length(self) -> float:
        return self.radius * abs(self.sweep)


SynthRecipe = tuple["Line | Arc", ...]


def _frames(recipe) -> list[tuple[float, float, float]]:
    """(x, y, heading) at the start of each primitive plus the final state."""
    x, y, heading = 0.0, 0.0, 0.0
    frames = [(x, y, heading)]
    for prim in recipe:
        if isinstance(prim, Line):
            x += prim.length * math.cos(heading)
            y += prim.length * math.sin(heading)
        else:
            sign = 1.0 if prim.sweep > 0 else -1.0
            cx = x - sign * prim.radius * math.sin(heading)
            cy = y + sign * prim.radius * math.cos(heading)
            heading += prim.sweep
            x = cx + sign * prim.radius * math.sin(heading)
            y = cy - sign * prim.radius * math.cos(heading)
        frames.append((x, y, heading))
    return frames


def _point_at(prim, start: tuple[float, float, float], offset: float):
    x0, y0, heading = start
    if isinstance(prim, Line):
        return x0 + offset * math.cos(heading), y0 + offset * math.sin(heading)
    sign = 1.0 if prim.sweep > 0 else -1.0
    cx = x0 - sign * prim.radius * math.sin(heading)
    cy = y0 + sign * prim.radius * math.cos(heading)
    theta = heading + sign * offset / prim.radius
    return cx + sign * prim.radius * math.sin(theta), cy - sign * prim.radius * math.cos(theta)


def synth_track(
    recipe, spacing: float
) -> tuple[Polyline2D, Polyline3D | None]:
    """Sample a recipe at (near) uniform arc-length spacing.

    Returns the planar centerline and, when every primitive carries a slope,
    the exact ground-truth 3D centerline obtained by dropping each planar
    step at its primitive's slope (the same recursion the optimizer uses).
    The starting height is the total drop, so the ground truth ends at zero.
    """
    recipe = tuple(recipe)
    if not recipe:
        raise ValueError("recipe must contain at least one primitive")
    if spacing <= 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    lengths = np.array([prim.length for prim in recipe])
    ends = np.cumsum(lengths)
    total = float(ends[-1])
    if spacing > total / 2:
        raise ValueError(f"spacing {spacing:g} exceeds half the track length {total:g}")
    frames = _frames(recipe)

    nsteps = int(round(total / spacing))
    arc_pos = np.linspace(0.0, total, nsteps + 1)
    prim_of = np.minimum(np.searchsorted(ends, arc_pos, side="right"), len(recipe) - 1)
    pts = np.empty((nsteps + 1, 2))
    for k, (s, m) in enumerate(zip(arc_pos, prim_of)):
        offset = s - (ends[m - 1] if m > 0 else 0.0)
        pts[k] = _point_at(recipe[m], frames[m], offset)
    line = Polyline2D(pts, spacing=total / nsteps)

    slopes = [prim.slope for prim in recipe]
    if any(s is None for s in slopes):
        return line, None
    g = np.asarray(slopes, dtype=float)
    drop_total = float(np.sum(lengths * g))
    steps = step_lengths(pts)
    z = drop_total - np.cumsum(steps * g[prim_of])
    ground_truth = Polyline3D(np.column_stack((pts, z)), spacing=line.spacing)
    return line, ground_truth
