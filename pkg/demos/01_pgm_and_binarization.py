"""
PGM round-trips and binarization
================================

Build a tiny grayscale ramp, push it through the PGM writer/reader, and
compare a fixed binarization threshold with the automatic one.
"""

from pathlib import Path

import numpy as np

from hcontour import GrayImage, binarize, otsu_threshold, read_pgm, write_pgm

out = Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

# a horizontal ramp with two flat plateaus, 64x32
ramp = np.linspace(0, 255, 64, dtype=np.uint8)
pixels = np.tile(ramp, (32, 1))
pixels[:, :16] = 30
pixels[:, -16:] = 220
image = GrayImage(pixels)

# PGM serialization is bit-exact: writing and re-reading changes nothing
blob = write_pgm(image)
assert read_pgm(blob) == image
(out / "ramp.pgm").write_bytes(blob)
print(f"wrote {out / 'ramp.pgm'} ({len(blob)} bytes)")

# a fixed threshold keeps whatever is strictly brighter than the cut
fixed = binarize(image, 127)
print("white fraction at threshold 127:", round(fixed.white_mask.mean(), 3))

# the automatic threshold maximizes between-class variance instead
t = otsu_threshold(image)
auto = binarize(image, t)
print(f"automatic threshold: {t}")
print("white fraction at automatic threshold:", round(auto.white_mask.mean(), 3))

(out / "ramp_binary.pgm").write_bytes(write_pgm(auto))
print(f"wrote {out / 'ramp_binary.pgm'}")
