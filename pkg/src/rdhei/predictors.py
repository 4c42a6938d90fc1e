"""Chess-board predictors (plus/cross) and the MED/GAP analysis predictors.

All predictors come in two shapes: a scalar ``name(img, r, c)`` and a
vectorised ``predict(pixels, flat_indices, name)`` used by the pipeline.
"""

from __future__ import annotations

import numpy as np

from rdhei.image import GrayImage
from rdhei.lattice import BORDER, Phase, target_indices

FAILURE_THRESHOLD = 64
ERROR_RANGE = 255
PREDICTORS = ("wpp", "bcp", "med", "gap")

_PLUS = ((-1, 0), (1, 0), (0, -1), (0, 1))
_CROSS = ((-1, -1), (-1, 1), (1, -1), (1, 1))


def _pixels(img) -> np.ndarray:
    return img.pixels if isinstance(img, GrayImage) else np.asarray(img)


def _check_context(shape, r, c, offsets):
    P, Q = shape
    for dr, dc in offsets:
        if not (0 <= r + dr < P and 0 <= c + dc < Q):
            raise IndexError(f"context of ({r}, {c}) leaves the {P}x{Q} image")


def _mean4(values) -> int:
    # round half up
    return (int(sum(int(v) for v in values)) + 2) // 4


def wpp(img, r: int, c: int) -> int:
    px = _pixels(img)
    _check_context(px.shape, r, c, _PLUS)
    return _mean4(px[r + dr, c + dc] for dr, dc in _PLUS)


def bcp(img, r: int, c: int) -> int:
    px = _pixels(img)
    _check_context(px.shape, r, c, _CROSS)
    return _mean4(px[r + dr, c + dc] for dr, dc in _CROSS)


def _med(w, n, nw):
    hi = np.maximum(w, n)
    lo = np.minimum(w, n)
    return np.where(nw >= hi, lo, np.where(nw <= lo, hi, w + n - nw))


def med(img, r: int, c: int) -> int:
    """LOCO-I median edge detector from west, north and north-west."""
    px = _pixels(img).astype(np.int64)
    _check_context(px.shape, r, c, ((0, -1), (-1, 0), (-1, -1)))
    return int(_med(px[r, c - 1], px[r - 1, c], px[r - 1, c - 1]))


def _gap(w, ww, n, nn, nw, ne, nne):
    w, ww, n, nn, nw, ne, nne = (np.asarray(a, dtype=np.float64) for a in (w, ww, n, nn, nw, ne, nne))
    dh = np.abs(w - ww) + np.abs(n - nw) + np.abs(n - ne)
    dv = np.abs(w - nw) + np.abs(n - nn) + np.abs(ne - nne)
    diff = dv - dh
    t = (w + n) / 2.0 + (ne - nw) / 4.0
    t = np.select(
        [diff > 32, diff > 8, diff < -32, diff < -8],
        [(t + w) / 2.0, (3.0 * t + w) / 4.0, (t + n) / 2.0, (3.0 * t + n) / 4.0],
        default=t,
    )
    t = np.where(diff > 80, w, np.where(diff < -80, n, t))
    return np.clip(np.floor(t + 0.5), 0, 255).astype(np.int64)


_GAP_CTX = ((0, -1), (0, -2), (-1, 0), (-2, 0), (-1, -1), (-1, 1), (-2, 1))


def gap(img, r: int, c: int) -> int:
    """CALIC gradient-adjusted prediction, rounded half up and clipped to [0, 255]."""
    px = _pixels(img).astype(np.int64)
    _check_context(px.shape, r, c, _GAP_CTX)
    return int(_gap(*(px[r + dr, c + dc] for dr, dc in _GAP_CTX)))


def predict(pixels: np.ndarray, flat_idx: np.ndarray, name: str) -> np.ndarray:
    """Vectorised prediction at ``flat_idx``; context is assumed in bounds."""
    px = np.asarray(pixels, dtype=np.int64)
    Q = px.shape[1]
    flat = px.ravel()
    idx = np.asarray(flat_idx, dtype=np.int64)

    def at(dr, dc):
        return flat[idx + dr * Q + dc]

    if name == "wpp":
        return (sum(at(dr, dc) for dr, dc in _PLUS) + 2) // 4
    if name == "bcp":
        return (sum(at(dr, dc) for dr, dc in _CROSS) + 2) // 4
    if name == "med":
        return _med(at(0, -1), at(-1, 0), at(-1, -1))
    if name == "gap":
        return _gap(*(at(dr, dc) for dr, dc in _GAP_CTX))
    raise ValueError(f"unknown predictor {name!r}")


def eligible_indices(shape, name: str) -> np.ndarray:
    """Pixels scored for ``name``: matching-parity targets for wpp/bcp, all interior for med/gap."""
    if name == "wpp":
        return target_indices(shape, Phase.WHITE)
    if name == "bcp":
        return target_indices(shape, Phase.BLACK)
    if name in ("med", "gap"):
        P, Q = shape
        rows = np.arange(BORDER, P - BORDER)
        cols = np.arange(BORDER, Q - BORDER)
        return (rows[:, None] * Q + cols[None, :]).ravel()
    raise ValueError(f"unknown predictor {name!r}")


def prediction_errors(img, name: str) -> np.ndarray:
    px = _pixels(img)
    idx = eligible_indices(px.shape, name)
    return px.ravel()[idx].astype(np.int64) - predict(px, idx, name)


def error_histogram(img, name: str) -> np.ndarray:
    """Counts of e over [-255, 255]; entry k holds e = k - 255."""
    e = prediction_errors(img, name)
    return np.bincount(e + ERROR_RANGE, minlength=2 * ERROR_RANGE + 1)


def failure_probability(img, name: str) -> float:
    e = prediction_errors(img, name)
    if e.size == 0:
        return 0.0
    return float(np.count_nonzero(np.abs(e) >= FAILURE_THRESHOLD)) / e.size
