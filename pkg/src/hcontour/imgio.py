"""Image containers, PGM input/output, and gray-to-binary thresholding.

Coordinates are fixed throughout the package: origin at the top-left
pixel, x growing rightward, y growing downward.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

WHITE = 255
BLACK = 0


class PgmError(ValueError):
    """Malformed PGM stream; ``offset`` is the byte position of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


def _frozen_u8(pixels) -> np.ndarray:
    arr = np.asarray(pixels)
    if arr.ndim != 2:
        raise ValueError("pixels must form a 2-D row-major grid")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError("image must be at least 1x1")
    if arr.dtype != np.uint8:
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError("pixel values must be integers")
        if arr.size and (arr.min() < 0 or arr.max() > 255):
            raise ValueError("pixel values must lie in 0..255")
    out = np.ascontiguousarray(arr, dtype=np.uint8)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit luminance grid, shape (height, width). Immutable once built."""

    pixels: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "pixels", _frozen_u8(self.pixels))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.width}x{self.height})"


class BinaryImage(GrayImage):
    """GrayImage restricted to the two values 0 (black) and 255 (white)."""

    def __post_init__(self):
        super().__post_init__()
        bad = (self.pixels != BLACK) & (self.pixels != WHITE)
        if bad.any():
            raise ValueError("binary image may contain only 0 and 255")

    @classmethod
    def from_mask(cls, mask) -> "BinaryImage":
        mask = np.asarray(mask, dtype=bool)
        return cls(np.where(mask, WHITE, BLACK).astype(np.uint8))

    @property
    def white_mask(self) -> np.ndarray:
        return self.pixels == WHITE


def _skip_space(data: bytes, pos: int) -> int:
    # whitespace and '#' comment lines are both header filler
    n = len(data)
    while pos < n:
        c = data[pos]
        if c in b" \t\r\n\x0b\x0c":
            pos += 1
        elif c == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
        else:
            break
    return pos


def _read_token(data: bytes, pos: int, what: str) -> tuple[bytes, int, int]:
    pos = _skip_space(data, pos)
    if pos >= len(data):
        raise PgmError(f"unexpected end of data while reading {what}", pos)
    start = pos
    while pos < len(data) and data[pos] not in b" \t\r\n\x0b\x0c#":
        pos += 1
    return data[start:pos], start, pos


def _read_int(data: bytes, pos: int, what: str) -> tuple[int, int, int]:
    token, start, pos = _read_token(data, pos, what)
    if not token.isdigit():
        raise PgmError(f"malformed {what} {token!r}", start)
    return int(token), start, pos


def read_pgm(data: bytes) -> GrayImage:
    """Parse a PGM byte stream, binary (P5) or ASCII (P2), maxval <= 255.

    Header comments introduced by '#' are allowed.  Every failure raises
    :class:`PgmError` carrying the byte offset of the offending content.
    """
    magic, start, pos = _read_token(data, 0, "magic number")
    if magic not in (b"P5", b"P2"):
        raise PgmError(f"not a PGM stream: expected magic 'P5' or 'P2', got {magic!r}", start)
    width, wstart, pos = _read_int(data, pos, "width")
    height, hstart, pos = _read_int(data, pos, "height")
    if width == 0:
        raise PgmError("zero image width", wstart)
    if height == 0:
        raise PgmError("zero image height", hstart)
    maxval, mstart, pos = _read_int(data, pos, "maxval")
    if maxval == 0:
        raise PgmError("maxval must be positive", mstart)
    if maxval > 255:
        raise PgmError(f"maxval {maxval} above 255 is unsupported", mstart)

    count = width * height
    if magic == b"P5":
        if pos >= len(data) or data[pos] not in b" \t\r\n\x0b\x0c":
            raise PgmError("missing whitespace after maxval", pos)
        pos += 1
        if len(data) - pos < count:
            raise PgmError(
                f"truncated pixel data: expected {count} bytes, found {len(data) - pos}",
                len(data),
            )
        raster = np.frombuffer(data, dtype=np.uint8, count=count, offset=pos)
    else:
        values = np.empty(count, dtype=np.uint8)
        for i in range(count):
            value, vstart, pos = _read_int(data, pos, "pixel value")
            if value > 255:
                raise PgmError(f"pixel value {value} exceeds 255", vstart)
            values[i] = value
        raster = values
    return GrayImage(raster.reshape(height, width))


def write_pgm(image: GrayImage) -> bytes:
    """Serialize as binary P5 with maxval 255; read_pgm round-trips it bit-exactly."""
    header = f"P5\n{image.width} {image.height}\n255\n".encode("ascii")
    return header + image.pixels.tobytes()


def binarize(image: GrayImage, threshold: int) -> BinaryImage:
    """Map to white where luminance is strictly greater than ``threshold``.

    The strict comparison makes threshold 255 produce an all-black image,
    so white sets shrink monotonically as the threshold grows.
    """
    if not 0 <= threshold <= 255:
        raise ValueError("threshold must lie in 0..255")
    return BinaryImage.from_mask(image.pixels > threshold)


def otsu_threshold(image: GrayImage) -> int:
    """Threshold maximizing between-class variance over the 256-bin histogram.

    The split at t puts values <= t in one class and values > t in the
    other, matching :func:`binarize`.  Ties go to the smaller threshold.
    A uniform image returns its single value (binarizing at it yields
    all black).  Comparisons use exact integer arithmetic.
    """
    hist = np.bincount(image.pixels.ravel(), minlength=256).tolist()
    total = image.width * image.height
    total_sum = sum(v * h for v, h in enumerate(hist))

    nonzero = [v for v, h in enumerate(hist) if h]
    if len(nonzero) == 1:
        return nonzero[0]

    # between-class variance w0*w1*(mu0-mu1)^2 compared as the exact
    # rational N^2/D with N = sum0*total - total_sum*w0 and D = w0*w1
    best_t = 0
    best_n2 = -1
    best_d = 1
    w0 = 0
    sum0 = 0
    for t in range(256):
        w0 += hist[t]
        sum0 += t * hist[t]
        w1 = total - w0
        if w0 == 0 or w1 == 0:
            continue
        n = sum0 * total - total_sum * w0
        n2 = n * n
        d = w0 * w1
        if n2 * best_d > best_n2 * d:
            best_t, best_n2, best_d = t, n2, d
    return best_t
