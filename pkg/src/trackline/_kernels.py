"""NumPy implementation of the per-iteration cost kernel.

This is the fallback used when the compiled extension is unavailable; the
extension module mirrors this arithmetic operation for operation.
"""
from __future__ import annotations

import numpy as np

from .geometry import DEGENERATE_SQ_NORM, _index_derivatives

BACKEND_NAME = "numpy"


def evaluate(
    xy: np.ndarray,
    steps: np.ndarray,
    point_seg: np.ndarray,
    seg_lengths: np.ndarray,
    kp: np.ndarray,
    heights: np.ndarray,
    f: float,
    total_length: float,
    height_diff: float,
    avg_slope: float,
    wa: float,
    wb: float,
    wc: float,
    wd: float,
):
    """Cost of a height assignment over a (possibly scaled) planar line.

    Reconstructs the elevation profile implied by ``heights``, then returns
    ``(total, length_term, height_term, curvature_term, slope_term, z)``
    where the terms are the weighted absolute residuals against the targets
    and ``z`` is the reconstructed elevation. ``f`` scales x, y, the step
    lengths and the segment lengths; the planar curvature scales as ``kp/f``.
    """
    n = len(xy)
    slopes = heights / (f * seg_lengths)
    drops = (f * steps) * slopes[point_seg]
    z = height_diff - np.cumsum(drops)

    planar = f * steps[1:]
    dz = drops[1:]
    d3 = np.sqrt(planar * planar + dz * dz)
    length_term = wa * abs(total_length - float(np.sum(d3)))
    height_term = wb * abs(height_diff - float(np.sum(np.abs(dz))))

    p3 = np.column_stack((f * xy[:, 0], f * xy[:, 1], z))
    ks = _curvature_3d_values(p3)
    curvature_term = (wc / n) * float(np.sum(np.abs(kp / f - ks)))

    slope_term = wd * abs(float(np.mean(slopes)) - avg_slope)
    total = length_term + height_term + curvature_term + slope_term
    return total, length_term, height_term, curvature_term, slope_term, z


def _curvature_3d_values(p3: np.ndarray) -> np.ndarray:
    u, v = _index_derivatives(p3)
    uu = np.einsum("ij,ij->i", u, u)
    bad = np.nonzero(uu < DEGENERATE_SQ_NORM)[0]
    if bad.size:
        raise ValueError(f"vanishing first derivative at point index {int(bad[0])}")
    vv = np.einsum("ij,ij->i", v, v)
    uv = np.einsum("ij,ij->i", u, v)
    num = np.sqrt(np.maximum(uu * vv - uv * uv, 0.0))
    norm = np.sqrt(uu)
    return num / (norm * norm * norm)
