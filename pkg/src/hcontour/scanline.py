"""Direct row scanning: per-row block edge detection and contour assembly.

Each image row is searched for the widest horizontal stretch of white
pixels whose internal black gaps stay short enough to be cell voids
rather than background.  The accepted left/right columns of all rows are
then stitched into one closed polygon.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .imgio import BinaryImage


class NoContourError(ValueError):
    """No contour could be produced from the given input."""


@dataclass(frozen=True)
class ScanParams:
    """Tuning knobs for the row scanner.

    run_limit  -- longest run of black pixels still treated as interior
                  (a run must strictly exceed it to end the segment)
    min_width  -- smallest right-left distance an accepted row may have
    """

    run_limit: int = 20
    min_width: int = 10

    def __post_init__(self):
        if self.run_limit < 1:
            raise ValueError("run_limit must be >= 1")
        if self.min_width < 0:
            raise ValueError("min_width must be >= 0")


@dataclass(frozen=True)
class RowEdge:
    """Detected block boundary columns for one row."""

    y: int
    left_x: int
    right_x: int

    def __post_init__(self):
        if not 0 <= self.left_x <= self.right_x:
            raise ValueError("requires 0 <= left_x <= right_x")
        if self.y < 0:
            raise ValueError("row index must be >= 0")


@dataclass(frozen=True)
class Contour:
    """Closed polyline of integer pixel coordinates (last joins first)."""

    points: tuple[tuple[int, int], ...]
    closed: bool = field(default=True, init=False)

    def __post_init__(self):
        if len(self.points) < 1:
            raise ValueError("a contour needs at least one point")
        object.__setattr__(
            self, "points", tuple((int(x), int(y)) for x, y in self.points)
        )

    def __len__(self) -> int:
        return len(self.points)


def scan_row(row, params: ScanParams) -> tuple[int, int] | None:
    """Return (left_x, right_x) of the widest acceptable white segment.

    White pixels are grouped into segments: a black gap of length at most
    run_limit keeps the segment alive, a strictly longer gap ends it.
    The widest segment wins (ties break toward the smaller left_x) and is
    reported only when its width right-left reaches min_width.  Returns
    None when no segment qualifies; an all-black row is a valid input.
    """
    whites = np.flatnonzero(np.asarray(row) != 0)
    if whites.size == 0:
        return None
    gaps = np.diff(whites) - 1
    cuts = np.flatnonzero(gaps > params.run_limit) + 1
    segments = np.split(whites, cuts)
    widths = np.array([seg[-1] - seg[0] for seg in segments])
    best = int(np.argmax(widths))  # first max = leftmost on ties
    if widths[best] < params.min_width:
        return None
    return int(segments[best][0]), int(segments[best][-1])


def direct_scan(image: BinaryImage, params: ScanParams) -> list[RowEdge]:
    """Apply scan_row to every row, top to bottom; rejected rows are omitted."""
    edges = []
    for y in range(image.height):
        found = scan_row(image.pixels[y], params)
        if found is not None:
            edges.append(RowEdge(y, found[0], found[1]))
    return edges


def assemble_contour(edges: list[RowEdge]) -> Contour:
    """Stitch row edges into a closed polygon.

    Left points are walked in increasing y, then right points in
    decreasing y; consecutive duplicates (including the wrap-around
    pair) are collapsed.
    """
    if not edges:
        raise NoContourError("no contour points")
    for prev, cur in zip(edges, edges[1:]):
        if cur.y <= prev.y:
            raise ValueError("edges must be strictly increasing in y")
    walk = [(e.left_x, e.y) for e in edges]
    walk += [(e.right_x, e.y) for e in reversed(edges)]
    points: list[tuple[int, int]] = []
    for p in walk:
        if not points or points[-1] != p:
            points.append(p)
    while len(points) > 1 and points[-1] == points[0]:
        points.pop()
    return Contour(tuple(points))
