"""Straight/curved classification and contiguous segment partitions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import CurvatureProfile, Polyline2D, step_lengths

STRAIGHT = "straight"
CURVED = "curved"


@dataclass(frozen=True)
class SegmentationConfig:
    """Curvature threshold and neighborhood size for point classification."""

    curvature_threshold: float = 0.005
    smoothing_window: int = 5

    def __post_init__(self):
        if self.curvature_threshold <= 0:
            raise ValueError("curvature_threshold must be positive")
        if self.smoothing_window < 3 or self.smoothing_window % 2 == 0:
            raise ValueError("smoothing_window must be odd and at least 3")


@dataclass(frozen=True)
class SegmentPartition:
    """Contiguous point-index ranges with per-segment kind and planar length.

    Segment m covers points ``starts[m] .. starts[m] + counts[m] - 1``. A
    point on a segment boundary belongs to the later segment, so the step
    arriving at a segment's first point counts toward that segment's length
    (except for the very first point of the track, which has no step).
    """

    starts: np.ndarray
    counts: np.ndarray
    kinds: tuple[str, ...]
    planar_lengths: np.ndarray

    def __post_init__(self):
        starts = np.asarray(self.starts, dtype=np.int64)
        counts = np.asarray(self.counts, dtype=np.int64)
        lengths = np.asarray(self.planar_lengths, dtype=float)
        if not (len(starts) == len(counts) == len(self.kinds) == len(lengths)):
            raise ValueError("partition arrays must have equal lengths")
        if len(starts) == 0:
            raise ValueError("partition must contain at least one segment")
        if starts[0] != 0 or (np.diff(starts) != counts[:-1]).any():
            raise ValueError("segments must tile the point range contiguously")
        if (counts < 2).any():
            m = int(np.argmin(counts))
            raise ValueError(f"segment {m} has {int(counts[m])} point(s); need at least 2")
        if (lengths <= 0).any():
            raise ValueError("every segment needs positive planar length")
        if any(k not in (STRAIGHT, CURVED) for k in self.kinds):
            raise ValueError(f"segment kinds must be '{STRAIGHT}' or '{CURVED}'")
        object.__setattr__(self, "starts", starts)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "kinds", tuple(self.kinds))
        object.__setattr__(self, "planar_lengths", lengths)

    @property
    def segment_count(self) -> int:
        return len(self.counts)

    @property
    def point_count(self) -> int:
        return int(self.starts[-1] + self.counts[-1])

    def point_segments(self) -> np.ndarray:
        """Owning segment index for every point."""
        return np.repeat(np.arange(self.segment_count, dtype=np.int64), self.counts)

    def ranges(self) -> list[tuple[int, int]]:
        """Half-open (start, stop) point ranges, one per segment."""
        return [
            (int(a), int(a + c)) for a, c in zip(self.starts, self.counts)
        ]


def classify_points(profile: CurvatureProfile, config: SegmentationConfig) -> list[str]:
    """Raw per-point label: straight iff curvature is below the threshold."""
    if len(profile) == 0:
        raise ValueError("curvature profile is empty")
    return [
        STRAIGHT if k < config.curvature_threshold else CURVED
        for k in profile.values
    ]


def _majority_pass(
    straight: np.ndarray, below: np.ndarray, half: int
) -> np.ndarray:
    """One sweep of the neighborhood rule over boolean straight flags."""
    n = len(straight)
    out = np.empty(n, dtype=bool)
    for i in range(n):
        lo = max(0, i - half)
        hi = min(n, i + half + 1)
        window = straight[lo:hi]
        out[i] = below[i] and 2 * int(window.sum()) > len(window)
    return out


def smooth_labels(
    labels: list[str], profile: CurvatureProfile, config: SegmentationConfig
) -> list[str]:
    """Stabilize labels against isolated misclassifications.

    A point ends up straight only when its own curvature is below the
    threshold and the majority of its window agrees; the rule is swept until
    the labeling is self-consistent, so applying this twice changes nothing.
    """
    n = len(labels)
    if n != len(profile):
        raise ValueError("labels and profile must have equal lengths")
    if config.smoothing_window > n:
        raise ValueError("smoothing window exceeds the number of points")
    half = config.smoothing_window // 2
    below = profile.values < config.curvature_threshold
    state = np.fromiter((lab == STRAIGHT for lab in labels), dtype=bool, count=n)
    seen: dict[bytes, int] = {}
    history: list[np.ndarray] = []
    while True:
        key = state.tobytes()
        if key in seen:
            # The sweep entered a cycle; demoting every point that is not
            # straight throughout the cycle yields a state the sweep can only
            # shrink, which forces convergence.
            cycle = history[seen[key]:]
            state = np.logical_and.reduce(cycle)
            seen.clear()
            history.clear()
            continue
        seen[key] = len(history)
        history.append(state)
        nxt = _majority_pass(state, below, half)
        if np.array_equal(nxt, state):
            break
        state = nxt
    return [STRAIGHT if flag else CURVED for flag in state]


def build_partition(labels: list[str], line: Polyline2D) -> SegmentPartition:
    """Turn maximal runs of equal label into a segment partition."""
    n = line.n
    if len(labels) != n:
        raise ValueError(f"got {len(labels)} labels for {n} points")
    flags = [lab == STRAIGHT for lab in labels]
    starts = [0]
    for i in range(1, n):
        if flags[i] != flags[i - 1]:
            starts.append(i)
    starts_arr = np.asarray(starts, dtype=np.int64)
    counts = np.diff(np.append(starts_arr, n))
    kinds = tuple(STRAIGHT if flags[a] else CURVED for a in starts)
    return SegmentPartition(
        starts_arr, counts, kinds, _segment_lengths(starts_arr, counts, line)
    )


def _segment_lengths(
    starts: np.ndarray, counts: np.ndarray, line: Polyline2D
) -> np.ndarray:
    """Planar length per segment: the steps arriving at its owned points."""
    steps = step_lengths(line.xy)
    bounds = np.append(starts, starts[-1] + counts[-1])
    sums = np.add.reduceat(steps, bounds[:-1])
    return sums


def adjust_partition_count(
    part: SegmentPartition, line: Polyline2D, s: int
) -> SegmentPartition:
    """Split or merge segments until the partition has exactly ``s`` of them.

    Splits cut the planar-longest segment at its arc-length midpoint (both
    halves keep the parent's kind); merges fold the planar-shortest segment
    into its shorter neighbor (curved wins over straight). Ties pick the
    lower segment index. Total planar length is conserved because point
    ownership is only ever repartitioned.
    """
    n = line.n
    if not 1 <= s <= n // 2:
        raise ValueError(f"segment count {s} outside valid range [1, {n // 2}]")
    if part.point_count != n:
        raise ValueError("partition does not match the polyline")
    steps = step_lengths(line.xy)
    starts = list(map(int, part.starts))
    counts = list(map(int, part.counts))
    kinds = list(part.kinds)

    def seg_len(m: int) -> float:
        a = starts[m]
        return float(steps[a:a + counts[m]].sum())

    while len(counts) < s:
        lengths = [seg_len(m) for m in range(len(counts))]
        order = sorted(range(len(counts)), key=lambda m: (-lengths[m], m))
        m = next((i for i in order if counts[i] >= 4), None)
        if m is None:
            raise ValueError(
                f"cannot reach {s} segments: no segment has the 4 points a split needs"
            )
        a, c = starts[m], counts[m]
        # Arc length accumulated once the first child ends at point t - 1.
        cum = np.cumsum(steps[a:a + c])
        half_target = cum[-1] / 2.0
        candidates = range(2, c - 1)  # both children keep >= 2 points
        t_off = min(candidates, key=lambda t: abs(cum[t - 1] - half_target))
        starts.insert(m + 1, a + t_off)
        counts[m] = t_off
        counts.insert(m + 1, c - t_off)
        kinds.insert(m + 1, kinds[m])

    while len(counts) > s:
        lengths = [seg_len(m) for m in range(len(counts))]
        m = min(range(len(counts)), key=lambda i: (lengths[i], i))
        if m == 0:
            other = 1
        elif m == len(counts) - 1:
            other = m - 1
        else:
            other = m - 1 if lengths[m - 1] <= lengths[m + 1] else m + 1
        lo, hi = min(m, other), max(m, other)
        merged_kind = CURVED if CURVED in (kinds[lo], kinds[hi]) else STRAIGHT
        counts[lo] += counts[hi]
        kinds[lo] = merged_kind
        del starts[hi], counts[hi], kinds[hi]

    starts_arr = np.asarray(starts, dtype=np.int64)
    counts_arr = np.asarray(counts, dtype=np.int64)
    return SegmentPartition(
        starts_arr, counts_arr, tuple(kinds),
        _segment_lengths(starts_arr, counts_arr, line),
    )
