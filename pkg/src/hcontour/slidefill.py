"""Sliding-window fill and external border tracing.

A core x core window steps across the binarized image; any window whose
mean luminance (taken over the pristine input) exceeds a threshold is
flooded to white.  The porous block thereby solidifies into one large
connected component whose outer border is then traced.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .imgio import WHITE, BinaryImage
from .scanline import Contour, NoContourError

# Moore neighborhood in clockwise screen order (y grows downward).
_RING = ((0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1))
_RING_INDEX = {off: k for k, off in enumerate(_RING)}


@dataclass(frozen=True)
class SlidingParams:
    """Window geometry and fill decision threshold.

    core           -- window side length in pixels
    step           -- window stride, applied identically in x and y
    fill_threshold -- a window is flooded when its mean exceeds this
    """

    core: int = 8
    step: int = 8
    fill_threshold: int | float = 40

    def __post_init__(self):
        if self.core < 1:
            raise ValueError("core must be >= 1")
        if self.step < 1:
            raise ValueError("step must be >= 1")
        if not 0 <= self.fill_threshold <= 255:
            raise ValueError("fill_threshold must lie in 0..255")
        if self.step > 2 * self.core:
            # advisory only: oversized strides leave unfilled gaps
            warnings.warn(
                f"step {self.step} exceeds 2*core ({2 * self.core}); "
                "gaps between windows will never be filled",
                UserWarning,
                stacklevel=2,
            )


@dataclass(frozen=True)
class ContourSet:
    """External boundaries of white components, in discovery order."""

    contours: tuple[Contour, ...]

    def __len__(self) -> int:
        return len(self.contours)


def sliding_fill(image: BinaryImage, params: SlidingParams) -> BinaryImage:
    """Flood every qualifying window to white, leaving the rest untouched.

    Windows sit at (i*step, j*step) for i, j >= 0 and are clipped at the
    right/bottom borders; the mean is taken over the clipped pixel count.
    All means are computed from an immutable snapshot of the input, so
    the result is independent of window visiting order.  The comparison
    ``mean > fill_threshold`` is evaluated exactly as
    ``sum > fill_threshold * count`` in rational arithmetic.
    """
    h, w = image.height, image.width
    core, step = params.core, params.step
    xs = np.arange(0, w, step, dtype=np.int64)
    ys = np.arange(0, h, step, dtype=np.int64)
    x1 = np.minimum(xs + core, w)
    y1 = np.minimum(ys + core, h)

    ii = np.zeros((h + 1, w + 1), dtype=np.int64)
    ii[1:, 1:] = image.pixels.astype(np.int64).cumsum(axis=0).cumsum(axis=1)
    sums = (
        ii[np.ix_(y1, x1)]
        - ii[np.ix_(ys, x1)]
        - ii[np.ix_(y1, xs)]
        + ii[np.ix_(ys, xs)]
    )
    areas = np.multiply.outer(y1 - ys, x1 - xs)

    # smallest integer sum satisfying sum > threshold*count, per distinct count
    t = Fraction(params.fill_threshold)
    uniq = np.unique(areas)
    min_sums = np.array(
        [(t.numerator * int(a)) // t.denominator + 1 for a in uniq], dtype=np.int64
    )
    qualified = sums >= min_sums[np.searchsorted(uniq, areas)]

    jq, iq = np.nonzero(qualified)
    diff = np.zeros((h + 1, w + 1), dtype=np.int32)
    np.add.at(diff, (ys[jq], xs[iq]), 1)
    np.add.at(diff, (ys[jq], x1[iq]), -1)
    np.add.at(diff, (y1[jq], xs[iq]), -1)
    np.add.at(diff, (y1[jq], x1[iq]), 1)
    covered = diff.cumsum(axis=0).cumsum(axis=1)[:h, :w] > 0
    return BinaryImage(np.where(covered, WHITE, image.pixels).astype(np.uint8))


def _row_runs(mask_row: np.ndarray) -> list[tuple[int, int]]:
    """Half-open [start, end) runs of True values in one row."""
    d = np.diff(np.concatenate(([0], mask_row.astype(np.int8), [0])))
    starts = np.flatnonzero(d == 1)
    ends = np.flatnonzero(d == -1)
    return list(zip(starts.tolist(), ends.tolist()))


class _RunLabels:
    """8-connected component labelling over per-row white runs (union-find)."""

    def __init__(self, mask: np.ndarray):
        self.parent: list[int] = []
        self.run_row: list[int] = []
        self.run_span: list[tuple[int, int]] = []
        prev_ids: list[int] = []
        prev_runs: list[tuple[int, int]] = []
        for y in range(mask.shape[0]):
            runs = _row_runs(mask[y])
            ids = []
            for span in runs:
                rid = len(self.parent)
                self.parent.append(rid)
                self.run_row.append(y)
                self.run_span.append(span)
                ids.append(rid)
            # join runs whose column intervals touch within +-1 (8-connectivity)
            i = j = 0
            while i < len(prev_runs) and j < len(runs):
                a, b = prev_runs[i]
                c, d = runs[j]
                if c <= b and a <= d:
                    self._union(prev_ids[i], ids[j])
                if b <= d:
                    i += 1
                else:
                    j += 1
            prev_ids, prev_runs = ids, runs

    def _find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def _union(self, i: int, j: int) -> None:
        ri, rj = self._find(i), self._find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)

    def component_starts(self) -> list[tuple[int, int]]:
        """Top-left pixel (x, y) of each component, in row-major discovery order."""
        first: dict[int, tuple[int, int]] = {}
        for rid in range(len(self.parent)):
            root = self._find(rid)
            key = (self.run_row[rid], self.run_span[rid][0])
            if root not in first or key < first[root]:
                first[root] = key
        return [(x, y) for y, x in sorted(first.values())]


def _trace_boundary(mask: np.ndarray, start: tuple[int, int]) -> list[tuple[int, int]]:
    """Moore-neighbor walk around one component, clockwise under y-down axes.

    The walk stops as soon as the (pixel, backtrack) state repeats, which
    closes exactly one loop around the outer border; trailing repeats of
    the start pixel are trimmed so the closing edge stays implicit.
    """
    h, w = mask.shape
    px, py = start
    bx, by = px - 1, py  # row-major discovery guarantees a non-white west side
    points = [(px, py)]
    seen = {(px, py, bx, by)}
    while True:
        k0 = _RING_INDEX[(bx - px, by - py)]
        state = None
        for turn in range(1, 9):
            k = (k0 + turn) % 8
            cx, cy = px + _RING[k][0], py + _RING[k][1]
            if 0 <= cx < w and 0 <= cy < h and mask[cy, cx]:
                back = _RING[(k0 + turn - 1) % 8]
                state = (cx, cy, px + back[0], py + back[1])
                break
        if state is None or state in seen:
            break
        seen.add(state)
        points.append((state[0], state[1]))
        px, py, bx, by = state
    while len(points) > 1 and points[-1] == points[0]:
        points.pop()
    return points


def trace_external_contours(image: BinaryImage) -> ContourSet:
    """Outer boundary of every 8-connected white component.

    Components are discovered in row-major scan order; holes are never
    traced.  Each traced point is a white pixel with at least one black
    or out-of-bounds 4-neighbor.
    """
    mask = image.white_mask
    if not mask.any():
        return ContourSet(())
    labels = _RunLabels(mask)
    contours = tuple(
        Contour(tuple(_trace_boundary(mask, start)))
        for start in labels.component_starts()
    )
    return ContourSet(contours)


def contour_area(contour: Contour) -> float:
    """Absolute shoelace area of the closed polygon; degenerate shapes give 0."""
    if len(set(contour.points)) < 3:
        return 0.0
    pts = np.asarray(contour.points, dtype=np.int64)
    x, y = pts[:, 0], pts[:, 1]
    twice = np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
    return abs(float(twice)) / 2.0


def largest_contour(contour_set: ContourSet) -> Contour:
    """Contour maximizing area; ties prefer more points, then earlier discovery."""
    if not contour_set.contours:
        raise NoContourError("no contours found")
    best = contour_set.contours[0]
    best_area = contour_area(best)
    for candidate in contour_set.contours[1:]:
        area = contour_area(candidate)
        if area > best_area or (area == best_area and len(candidate) > len(best)):
            best, best_area = candidate, area
    return best


def detect_sliding(image: BinaryImage, params: SlidingParams) -> Contour:
    """Full pipeline: fill, trace external borders, keep the largest contour."""
    filled = sliding_fill(image, params)
    return largest_contour(trace_external_contours(filled))
