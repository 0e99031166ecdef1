"""
Direct row scanning on a convex blank
=====================================

Generate a rectangular honeycomb blank, scan it row by row, and measure
how well the stitched contour matches the ground-truth outline.
"""

from pathlib import Path

from hcontour import (
    ScanParams,
    ShapeSpec,
    assemble_contour,
    binarize,
    direct_scan,
    generate,
    iou,
    otsu_threshold,
    rasterize_contour,
    write_pgm,
)

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

size = (400, 300)
spec = ShapeSpec(
    polygon=((60, 40), (340, 40), (340, 260), (60, 260)),
    cell_pitch=24,
    wall_thickness=2,
    image_size=size,
)
image, truth = generate(spec)
(out / "convex_blank.pgm").write_bytes(write_pgm(image))

binary = binarize(image, otsu_threshold(image))

# the longest black run inside the block is bounded by the cell pitch,
# so twice the pitch is a safe run limit
params = ScanParams(run_limit=2 * spec.cell_pitch, min_width=10)
edges = direct_scan(binary, params)
print(f"accepted rows: {len(edges)} of {size[1]}")

contour = assemble_contour(edges)
print(f"contour points: {len(contour)}")

detected = rasterize_contour(contour, size)
print(f"IoU against ground truth: {iou(detected, truth.mask):.4f}")

(out / "convex_detected_mask.pgm").write_bytes(write_pgm(detected))
print(f"wrote {out / 'convex_blank.pgm'} and {out / 'convex_detected_mask.pgm'}")
