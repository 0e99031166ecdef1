"""
Sliding-window fill, stage by stage
===================================

A honeycomb blank has no solid silhouette: binarize it and an external
border tracer sees every cell as its own small contour.  Sliding a
window across the image and flooding every window whose mean clears a
threshold welds the cells into one component first.
"""

from pathlib import Path

from hcontour import (
    ShapeSpec,
    SlidingParams,
    binarize,
    contour_area,
    generate,
    largest_contour,
    otsu_threshold,
    sliding_fill,
    trace_external_contours,
    write_pgm,
)

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

spec = ShapeSpec(
    polygon=((60, 40), (340, 40), (340, 260), (60, 260)),
    cell_pitch=24,
    wall_thickness=2,
    image_size=(400, 300),
)
image, _ = generate(spec)
binary = binarize(image, otsu_threshold(image))
(out / "stage1_binarized.pgm").write_bytes(write_pgm(binary))

# stage 1: the raw binarized image falls apart into per-cell contours
raw = trace_external_contours(binary)
print(f"contours on the raw binarized image: {len(raw)}")

# stage 2: the fill turns the porous block into one solid region
filled = sliding_fill(binary, SlidingParams(core=8, step=8, fill_threshold=40))
(out / "stage2_filled.pgm").write_bytes(write_pgm(filled))
merged = trace_external_contours(filled)
print(f"contours after the sliding fill: {len(merged)}")

# stage 3: keeping the largest contour drops whatever noise is left
best = largest_contour(merged)
print(f"largest contour: {len(best)} points, area {contour_area(best):.0f} px^2")
print(f"wrote stages to {out}")
