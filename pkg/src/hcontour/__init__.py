"""Outer-contour extraction for honeycomb-block images.

Two detection strategies over binarized images: direct per-row scanning
(fast, convex blanks only) and sliding-window fill followed by external
border tracing (slower, any blank shape).  A deterministic synthetic
generator and IoU metrics make the difference measurable.
"""

from .imgio import (
    BLACK,
    WHITE,
    BinaryImage,
    GrayImage,
    PgmError,
    binarize,
    otsu_threshold,
    read_pgm,
    write_pgm,
)
from .scanline import (
    Contour,
    NoContourError,
    RowEdge,
    ScanParams,
    assemble_contour,
    direct_scan,
    scan_row,
)
from .slidefill import (
    ContourSet,
    SlidingParams,
    contour_area,
    detect_sliding,
    largest_contour,
    sliding_fill,
    trace_external_contours,
)
from .synthbench import (
    ComparisonReport,
    DirectResult,
    GroundTruth,
    ShapeSpec,
    SlidingResult,
    compare,
    generate,
    iou,
    rasterize_contour,
)

__all__ = [
    "BLACK",
    "WHITE",
    "BinaryImage",
    "ComparisonReport",
    "Contour",
    "ContourSet",
    "DirectResult",
    "GrayImage",
    "GroundTruth",
    "NoContourError",
    "PgmError",
    "RowEdge",
    "ScanParams",
    "ShapeSpec",
    "SlidingParams",
    "SlidingResult",
    "assemble_contour",
    "binarize",
    "compare",
    "contour_area",
    "detect_sliding",
    "direct_scan",
    "generate",
    "iou",
    "largest_contour",
    "otsu_threshold",
    "rasterize_contour",
    "read_pgm",
    "scan_row",
    "sliding_fill",
    "trace_external_contours",
    "write_pgm",
]
