"""Grayscale raster type, PGM codec and quality metrics."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from rdhei.fileio import atomic_write


class PGMError(ValueError):
    """Raised for malformed or unsupported PGM content."""


@dataclass(frozen=True, eq=False)
class GrayImage:
    """8-bit grayscale image stored as a (height, width) uint8 array."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 2 or arr.shape[0] <= 0 or arr.shape[1] <= 0:
            raise ValueError(f"expected a non-empty 2-D raster, got shape {arr.shape}")
        if arr.dtype != np.uint8:
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise ValueError("intensities must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        arr = np.array(arr, dtype=np.uint8, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @classmethod
    def from_list(cls, width: int, height: int, values) -> "GrayImage":
        values = list(values)
        if len(values) != width * height:
            raise ValueError("pixel count does not match dimensions")
        return cls(np.array(values, dtype=np.int64).reshape(height, width))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.pixels, other.pixels))

    def __repr__(self):
        return f"GrayImage({self.height}x{self.width})"


_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    tokens = []
    pos = 0
    for _ in range(count):
        m = _TOKEN.match(data, pos)
        if m is None:
            raise PGMError("truncated PGM header")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens, pos


def read_pgm(data: bytes) -> GrayImage:
    """Decode a P2 (ASCII) or P5 (binary) PGM with maxval 255."""
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise PGMError(f"unsupported magic {magic!r}")
    tokens, pos = _header_tokens(data, 4)
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise PGMError("non-numeric header field") from exc
    if width <= 0 or height <= 0:
        raise PGMError(f"invalid dimensions {width}x{height}")
    if maxval != 255:
        raise PGMError(f"maxval {maxval} unsupported (only 255)")
    n = width * height

    if magic == b"P5":
        # exactly one whitespace byte separates maxval from the raster
        if pos >= len(data) or not data[pos : pos + 1].isspace():
            raise PGMError("missing whitespace after maxval")
        raster = data[pos + 1 : pos + 1 + n]
        if len(raster) < n:
            raise PGMError(f"truncated pixel data: {len(raster)} of {n} bytes")
        values = np.frombuffer(raster, dtype=np.uint8)
    else:
        body = re.sub(rb"#[^\n]*", b"", data[pos:]).split()
        if len(body) < n:
            raise PGMError(f"truncated pixel data: {len(body)} of {n} samples")
        try:
            values = np.array([int(t) for t in body[:n]], dtype=np.int64)
        except ValueError as exc:
            raise PGMError("non-numeric sample") from exc
        if values.min() < 0 or values.max() > 255:
            raise PGMError("sample exceeds maxval")
    return GrayImage(values.reshape(height, width))


def write_pgm(img: GrayImage) -> bytes:
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.pixels.tobytes()


def load_pgm(path) -> GrayImage:
    with open(path, "rb") as fh:
        return read_pgm(fh.read())


def save_pgm(img: GrayImage, path) -> None:
    atomic_write(path, write_pgm(img))


def psnr(a: GrayImage, b: GrayImage) -> float:
    """Peak signal-to-noise ratio at peak 255; ``math.inf`` for identical images."""
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    diff = a.pixels.astype(np.int64) - b.pixels.astype(np.int64)
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0**2 / mse)


def format_psnr(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.2f}"


def histogram(img: GrayImage) -> np.ndarray:
    return np.bincount(img.pixels.ravel(), minlength=256).astype(np.int64)
