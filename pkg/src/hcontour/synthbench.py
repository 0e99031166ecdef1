"""Synthetic honeycomb blanks with ground truth, plus accuracy metrics.

The generator is deterministic down to the byte: hexagon geometry is
computed in exact rational arithmetic (sqrt(3) is replaced by the fixed
rational 1732051/1000000) and noise specks come from a 64-bit linear
congruential generator with the constants

    state' = (6364136223846793005 * state + 1442695040888963407) mod 2**64

so identical specs reproduce identical images on any platform.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .imgio import BinaryImage, GrayImage, binarize
from .scanline import Contour, ScanParams, assemble_contour, direct_scan
from .slidefill import (
    SlidingParams,
    contour_area,
    largest_contour,
    sliding_fill,
    trace_external_contours,
)

_SQRT3 = Fraction(1_732_051, 1_000_000)
_LCG_MUL = 6364136223846793005
_LCG_ADD = 1442695040888963407
_LCG_MASK = (1 << 64) - 1

# each cell outline is pulled inward by wall/2 + this, in pixels, so that
# neighboring cells render as separate wall rings instead of one network
_CELL_INSET_EXTRA = 2


def _orient(o, a, b) -> int:
    v = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    return (v > 0) - (v < 0)


def _on_segment(p, a, b) -> bool:
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
        and _orient(a, b, p) == 0
    )


def _segments_cross(a, b, c, d) -> bool:
    o1, o2 = _orient(a, b, c), _orient(a, b, d)
    o3, o4 = _orient(c, d, a), _orient(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    return (
        (o1 == 0 and _on_segment(c, a, b))
        or (o2 == 0 and _on_segment(d, a, b))
        or (o3 == 0 and _on_segment(a, c, d))
        or (o4 == 0 and _on_segment(b, c, d))
    )


def _is_simple_polygon(points) -> bool:
    n = len(points)
    for i in range(n):
        a, b = points[i], points[(i + 1) % n]
        if a == b:
            return False
        for j in range(i + 1, n):
            c, d = points[j], points[(j + 1) % n]
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent:
                # neighbors may only share the one common endpoint
                shared = b if j == i + 1 else a
                other = d if j == i + 1 else c
                if _on_segment(other, a, b) and other != shared:
                    return False
                continue
            if _segments_cross(a, b, c, d):
                return False
    return True


@dataclass(frozen=True)
class ShapeSpec:
    """Parametric description of a synthetic blank.

    polygon vertices are integer pixel coordinates forming a simple
    polygon inside the image; the hexagonal lattice (pointy-top, spacing
    cell_pitch, line width wall_thickness) is drawn only inside it.
    speck_count isolated bright pixels are scattered outside the polygon
    deterministically from speck_seed.
    """

    polygon: tuple[tuple[int, int], ...]
    cell_pitch: int
    wall_thickness: int
    image_size: tuple[int, int]
    speck_count: int = 0
    speck_seed: int = 1
    wall_luminance: int = 215
    background_luminance: int = 25

    def __post_init__(self):
        object.__setattr__(
            self, "polygon", tuple((int(x), int(y)) for x, y in self.polygon)
        )
        w, h = self.image_size
        if w < 1 or h < 1:
            raise ValueError("image_size must be at least 1x1")
        if len(self.polygon) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        for x, y in self.polygon:
            if not (0 <= x < w and 0 <= y < h):
                raise ValueError(f"polygon vertex ({x}, {y}) outside image bounds")
        if not _is_simple_polygon(self.polygon):
            raise ValueError("polygon must be simple (non-self-intersecting)")
        if self.cell_pitch < 2:
            raise ValueError("cell_pitch must be >= 2")
        if self.wall_thickness < 1:
            raise ValueError("wall_thickness must be >= 1")
        if self.speck_count < 0:
            raise ValueError("speck_count must be >= 0")
        for name in ("wall_luminance", "background_luminance"):
            v = getattr(self, name)
            if not 0 <= v <= 255:
                raise ValueError(f"{name} must lie in 0..255")
        if self.wall_luminance <= self.background_luminance:
            raise ValueError("wall_luminance must exceed background_luminance")


@dataclass(frozen=True)
class GroundTruth:
    """Filled polygon mask: 255 inside the blank outline, 0 outside."""

    mask: BinaryImage


def _polygon_mask(points, size: tuple[int, int]) -> np.ndarray:
    """Even-odd fill sampled at pixel centers; centers exactly on an edge count as inside.

    Crossing positions are compared in exact integer arithmetic, so the
    mask is reproducible bit for bit.
    """
    w, h = size
    pts = [(int(x), int(y)) for x, y in points]
    n = len(pts)
    toggles = np.zeros((h, w + 1), dtype=np.uint8)
    inside_edge = np.zeros((h, w), dtype=bool)
    for i in range(n):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % n]
        # pixels whose center lies exactly on the segment
        dx, dy = x2 - x1, y2 - y1
        g = math.gcd(abs(dx), abs(dy))
        if g == 0:
            if 0 <= x1 < w and 0 <= y1 < h:
                inside_edge[y1, x1] = True
            continue
        for k in range(g + 1):
            px, py = x1 + k * dx // g, y1 + k * dy // g
            if 0 <= px < w and 0 <= py < h:
                inside_edge[py, px] = True
        if dy == 0:
            continue
        ylo, yhi = (y1, y2) if y1 < y2 else (y2, y1)
        rows = np.arange(max(ylo, 0), min(yhi, h), dtype=np.int64)  # half-open [ylo, yhi)
        if rows.size == 0:
            continue
        # crossing x = x1 + (row - y1) * dx / dy; first column strictly right of it
        num = x1 * dy + (rows - y1) * dx
        first_right = np.floor_divide(num, dy) + 1
        first_right = np.clip(first_right, 0, w)
        toggles[rows, first_right] ^= 1
    parity = np.cumsum(toggles[:, :w], axis=1, dtype=np.uint8) & 1
    return (parity == 1) | inside_edge


def rasterize_contour(contour: Contour, size: tuple[int, int]) -> BinaryImage:
    """Fill a closed contour into a mask comparable with GroundTruth.

    Uses the same even-odd pixel-center rule as the ground-truth masks.
    Contours with fewer than 3 distinct points cover only the pixels on
    their segments (zero enclosed area).
    """
    w, h = size
    for x, y in contour.points:
        if not (0 <= x < w and 0 <= y < h):
            raise ValueError(f"contour point ({x}, {y}) outside {w}x{h}")
    return BinaryImage.from_mask(_polygon_mask(contour.points, size))


def iou(a: BinaryImage, b: BinaryImage) -> float:
    """Intersection over union of two white masks; 1.0 when both are empty."""
    if (a.width, a.height) != (b.width, b.height):
        raise ValueError(
            f"dimension mismatch: {a.width}x{a.height} vs {b.width}x{b.height}"
        )
    wa, wb = a.white_mask, b.white_mask
    union = int(np.count_nonzero(wa | wb))
    if union == 0:
        return 1.0
    return int(np.count_nonzero(wa & wb)) / union


def _hex_lattice(polygon, pitch: int, wall: int):
    """Cell-outline segments of a pointy-top hexagonal lattice.

    Neighboring cell centers sit ``pitch`` apart; each cell outline is
    inset by wall/2 + _CELL_INSET_EXTRA so adjacent rings never touch.
    The lattice is anchored so that the top vertex of cell (0, 0) lands
    exactly on the polygon's bounding-box origin, and covers the whole
    image (rings are clipped to the polygon later).
    """
    bx = min(x for x, _ in polygon)
    by = min(y for _, y in polygon)
    max_x = max(x for x, _ in polygon)
    max_y = max(y for _, y in polygon)

    radius = Fraction(pitch) / _SQRT3
    row_h = radius * 3 / 2
    draw_r = radius - Fraction(wall, 2) - _CELL_INSET_EXTRA
    if draw_r <= 0:
        raise ValueError("cell_pitch too small for the given wall_thickness")
    draw_half = draw_r * _SQRT3 / 2
    half = Fraction(pitch, 2)
    # cell (0, 0) has its top vertex at the bounding-box origin
    ox = Fraction(bx)
    oy = Fraction(by) + draw_r

    i_lo = math.floor((-pitch - ox) / pitch) - 1
    i_hi = math.ceil((max_x + pitch - ox) / pitch) + 1
    j_lo = math.floor((-pitch - oy) / row_h) - 1
    j_hi = math.ceil((max_y + pitch - oy) / row_h) + 1

    edges: list[tuple[tuple[int, int], tuple[int, int]]] = []
    for j in range(j_lo, j_hi + 1):
        cy = oy + j * row_h
        x_shift = half if j % 2 else Fraction(0)
        for i in range(i_lo, i_hi + 1):
            cx = ox + i * pitch + x_shift
            ring = (
                (cx, cy - draw_r),
                (cx + draw_half, cy - draw_r / 2),
                (cx + draw_half, cy + draw_r / 2),
                (cx, cy + draw_r),
                (cx - draw_half, cy + draw_r / 2),
                (cx - draw_half, cy - draw_r / 2),
            )
            rounded = [(int(round(vx)), int(round(vy))) for vx, vy in ring]
            for k in range(6):
                edges.append((rounded[k], rounded[(k + 1) % 6]))
    return edges


def _stamp_segment(canvas: np.ndarray, a, b, width: int) -> None:
    """Mark pixels whose center is within width/2 of segment ab (exact integers)."""
    h, w = canvas.shape
    margin = width // 2 + 1
    x_lo = max(min(a[0], b[0]) - margin, 0)
    x_hi = min(max(a[0], b[0]) + margin + 1, w)
    y_lo = max(min(a[1], b[1]) - margin, 0)
    y_hi = min(max(a[1], b[1]) + margin + 1, h)
    if x_lo >= x_hi or y_lo >= y_hi:
        return
    ys, xs = np.mgrid[y_lo:y_hi, x_lo:x_hi]
    pax = xs.astype(np.int64) - a[0]
    pay = ys.astype(np.int64) - a[1]
    dx, dy = b[0] - a[0], b[1] - a[1]
    seg_len2 = dx * dx + dy * dy
    pa2 = pax * pax + pay * pay
    if seg_len2 == 0:
        hit = 4 * pa2 <= width * width
    else:
        proj = pax * dx + pay * dy
        pbx = xs.astype(np.int64) - b[0]
        pby = ys.astype(np.int64) - b[1]
        pb2 = pbx * pbx + pby * pby
        line = 4 * (pa2 * seg_len2 - proj * proj) <= width * width * seg_len2
        hit = np.where(
            proj < 0,
            4 * pa2 <= width * width,
            np.where(proj > seg_len2, 4 * pb2 <= width * width, line),
        )
    canvas[y_lo:y_hi, x_lo:x_hi] |= hit


def _lcg_next(state: int) -> int:
    return (_LCG_MUL * state + _LCG_ADD) & _LCG_MASK


def generate(spec: ShapeSpec) -> tuple[GrayImage, GroundTruth]:
    """Render the synthetic blank and its ground-truth mask.

    Cell wall rings are drawn at wall_luminance inside the polygon only;
    each ring is slightly inset so neighboring cells stay disconnected,
    the way binarized photographs of real blanks fragment.  Specks land
    strictly outside the polygon, pairwise non-adjacent, each one an
    isolated single white pixel.
    """
    w, h = spec.image_size
    mask = _polygon_mask(spec.polygon, spec.image_size)
    img = np.full((h, w), spec.background_luminance, dtype=np.uint8)

    walls = np.zeros((h, w), dtype=bool)
    for a, b in _hex_lattice(spec.polygon, spec.cell_pitch, spec.wall_thickness):
        _stamp_segment(walls, a, b, spec.wall_thickness)
    walls &= mask
    img[walls] = spec.wall_luminance

    state = spec.speck_seed & _LCG_MASK
    placed = 0
    attempts = 0
    limit = 10_000 * max(spec.speck_count, 1)
    while placed < spec.speck_count:
        if attempts > limit:
            raise ValueError("could not place the requested number of specks")
        attempts += 1
        state = _lcg_next(state)
        x = (state >> 33) % w
        state = _lcg_next(state)
        y = (state >> 33) % h
        if mask[y, x]:
            continue
        y_lo, y_hi = max(y - 1, 0), min(y + 2, h)
        x_lo, x_hi = max(x - 1, 0), min(x + 2, w)
        if (img[y_lo:y_hi, x_lo:x_hi] != spec.background_luminance).any():
            continue
        img[y, x] = spec.wall_luminance
        placed += 1

    return GrayImage(img), GroundTruth(BinaryImage.from_mask(mask))


@dataclass(frozen=True)
class DirectResult:
    """Direct-scan pipeline outcome: accuracy, cost, and shape size."""

    iou: float
    ms: float
    rows: int
    point_count: int
    error: str | None


@dataclass(frozen=True)
class SlidingResult:
    """Sliding-fill pipeline outcome, including the pre-selection contour count."""

    iou: float
    ms: float
    contours_found: int
    point_count: int
    error: str | None


@dataclass(frozen=True)
class ComparisonReport:
    """Plain record of both pipelines on one image; draws no conclusions."""

    direct: DirectResult
    sliding: SlidingResult
    params: dict

    def to_json(self) -> str:
        """Fixed key order and float precision, for byte-stable output."""
        import json

        d, s = self.direct, self.sliding
        return (
            "{"
            f'"direct": {{"iou": {d.iou:.4f}, "ms": {d.ms:.3f}, '
            f'"rows": {d.rows}, "error": {json.dumps(d.error)}}}, '
            f'"sliding": {{"iou": {s.iou:.4f}, "ms": {s.ms:.3f}, '
            f'"contours_found": {s.contours_found}, "error": {json.dumps(s.error)}}}, '
            f'"params": {json.dumps(self.params)}'
            "}"
        )


_TIMING_RUNS = 5


def _median_ms(fn) -> tuple[object, str | None, float]:
    """Run fn repeatedly (it is deterministic); median wall-clock time of 5 runs."""
    times = []
    result, error = None, None
    for _ in range(_TIMING_RUNS):
        begin = time.perf_counter()
        try:
            result = fn()
            error = None
        except ValueError as exc:
            result, error = None, str(exc)
        times.append(time.perf_counter() - begin)
    times.sort()
    return result, error, times[len(times) // 2] * 1000.0


def compare(
    image: GrayImage,
    truth: GroundTruth,
    scan: ScanParams,
    slide: SlidingParams,
    bin_threshold: int,
) -> ComparisonReport:
    """Run both pipelines on the same image and report accuracy and runtime.

    A failure in one pipeline is captured in its ``error`` field without
    aborting the other.
    """
    size = (image.width, image.height)

    def run_direct():
        binary = binarize(image, bin_threshold)
        edges = direct_scan(binary, scan)
        return assemble_contour(edges), len(edges)

    def run_sliding():
        binary = binarize(image, bin_threshold)
        filled = sliding_fill(binary, slide)
        found = trace_external_contours(filled)
        return largest_contour(found), len(found)

    d_out, d_err, d_ms = _median_ms(run_direct)
    if d_err is None:
        d_contour, d_rows = d_out
        d_iou = iou(rasterize_contour(d_contour, size), truth.mask)
        direct = DirectResult(d_iou, d_ms, d_rows, len(d_contour), None)
    else:
        direct = DirectResult(0.0, d_ms, 0, 0, d_err)

    s_out, s_err, s_ms = _median_ms(run_sliding)
    if s_err is None:
        s_contour, s_found = s_out
        s_iou = iou(rasterize_contour(s_contour, size), truth.mask)
        sliding = SlidingResult(s_iou, s_ms, s_found, len(s_contour), None)
    else:
        sliding = SlidingResult(0.0, s_ms, 0, 0, s_err)

    params = {
        "bin_threshold": bin_threshold,
        "run_limit": scan.run_limit,
        "min_width": scan.min_width,
        "core": slide.core,
        "step": slide.step,
        "fill_threshold": slide.fill_threshold,
    }
    return ComparisonReport(direct, sliding, params)
