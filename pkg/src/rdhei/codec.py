"""MSB integration codec and the data hider's embed/extract pipeline.

Each subset of N target pixels contributes its N MSBs, packed big-endian
into an integer v < 2^N. Values with the top bit set are shrunk to their
N-bit 1's complement, which frees the top half of the range; a data bit of 1
is then written by complementing again. The marked MSB vector of a subset is
therefore always either the original vector or its bitwise complement.

The primitives accept Python ints or NumPy integer arrays.
"""

from __future__ import annotations

import numpy as np

from rdhei.crypto import xor_payload
from rdhei.image import GrayImage
from rdhei.lattice import BORDER, DEFAULT_SEED, MAX_N, MIN_SIDE, Phase, build_plan, check_n, subsets


class CapacityError(ValueError):
    pass


def _top(n: int) -> int:
    return 1 << (n - 1)


def _full(n: int) -> int:
    return (1 << n) - 1


def integrate(bits):
    """Pack MSBs big-endian: ``bits[0]`` carries weight 2^(N-1).

    A 2-D array integrates each row.
    """
    arr = np.asarray(bits, dtype=np.int64)
    n = arr.shape[-1]
    if not 1 <= n <= MAX_N:
        raise ValueError(f"N must be in [1, {MAX_N}], got {n}")
    weights = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)
    out = arr @ weights
    return int(out) if np.ndim(out) == 0 else out


def disintegrate(value, n: int):
    """Big-endian bit expansion of ``value`` into N bits (inverse of ``integrate``)."""
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    v = np.asarray(value, dtype=np.int64)
    return ((v[..., None] >> shifts) & 1).astype(np.uint8)


def shrink(value, n: int):
    if np.ndim(value) == 0:
        value = int(value)
        return _full(n) - value if value >= _top(n) else value
    value = np.asarray(value, dtype=np.int64)
    return np.where(value >= _top(n), _full(n) - value, value)


def embed_bit(shrunk, bit, n: int):
    if np.ndim(shrunk) == 0 and np.ndim(bit) == 0:
        shrunk, bit = int(shrunk), int(bit)
        if not 0 <= shrunk < _top(n):
            raise ValueError(f"shrunken value {shrunk} not below 2^{n - 1}")
        if bit not in (0, 1):
            raise ValueError(f"data bit must be 0 or 1, got {bit}")
        return _full(n) - shrunk if bit else shrunk
    shrunk = np.asarray(shrunk, dtype=np.int64)
    bit = np.asarray(bit, dtype=np.int64)
    if np.any((shrunk < 0) | (shrunk >= _top(n))) or np.any((bit != 0) & (bit != 1)):
        raise ValueError("embed_bit precondition violated")
    return np.where(bit == 1, _full(n) - shrunk, shrunk)


def extract_bit(value, n: int):
    if np.ndim(value) == 0:
        return int(int(value) >= _top(n))
    return (np.asarray(value, dtype=np.int64) >= _top(n)).astype(np.uint8)


def capacity(P: int, Q: int, n_white: int, n_black: int) -> int:
    """Embedding capacity in bits: floor(W / N_W) + floor(B / N_B) over interior targets."""
    if P < MIN_SIDE or Q < MIN_SIDE:
        raise ValueError(f"image must be at least {MIN_SIDE}x{MIN_SIDE}, got {P}x{Q}")
    check_n("N_W", n_white)
    check_n("N_B", n_black)
    h, w = P - 2 * BORDER, Q - 2 * BORDER
    # interior starts at an even row and column, so (r, c) parity matches (i, j)
    black = (h // 2) * (w // 2)
    white = (h * w) // 2
    return white // n_white + black // n_black


def mark_msbs(msbs: np.ndarray, data_bits: np.ndarray) -> np.ndarray:
    """Apply integrate -> shrink -> embed_bit -> disintegrate to a (J, N) MSB array."""
    n = msbs.shape[1]
    marked = embed_bit(shrink(integrate(msbs), n), data_bits, n)
    return disintegrate(marked, n)


def embed(
    encrypted: GrayImage,
    payload,
    k_d: bytes,
    n_white: int,
    n_black: int,
    seed: bytes = DEFAULT_SEED,
) -> GrayImage:
    """Hide ``payload`` (0/1 bits) in the MSBs of an encrypted image.

    The payload is encrypted under ``k_d`` and zero-padded to full capacity;
    white subsets take the first J_W bits, black subsets the rest.
    """
    plan = build_plan(encrypted.shape, n_white, n_black, seed)
    payload = np.asarray(payload, dtype=np.uint8).ravel()
    if payload.size > plan.capacity:
        raise CapacityError(f"payload of {payload.size} bits exceeds capacity {plan.capacity}")
    bits = np.zeros(plan.capacity, dtype=np.uint8)
    bits[: payload.size] = xor_payload(payload, k_d)

    flat = encrypted.pixels.ravel().copy()
    offset = 0
    for phase in (Phase.WHITE, Phase.BLACK):
        groups, _ = subsets(plan, phase)
        j = groups.shape[0]
        if j == 0:
            continue
        msbs = flat[groups] >> 7
        marked = mark_msbs(msbs, bits[offset : offset + j]).astype(np.uint8)
        flat[groups] = (flat[groups] & 0x7F) | (marked << 7)
        offset += j
    return GrayImage(flat.reshape(encrypted.shape))


def extract(
    marked: GrayImage,
    k_d: bytes,
    n_white: int,
    n_black: int,
    seed: bytes = DEFAULT_SEED,
    payload_len: int | None = None,
) -> np.ndarray:
    """Recover the payload bits; ``payload_len`` defaults to the full capacity."""
    plan = build_plan(marked.shape, n_white, n_black, seed)
    if payload_len is None:
        payload_len = plan.capacity
    if not 0 <= payload_len <= plan.capacity:
        raise CapacityError(f"payload length {payload_len} outside [0, {plan.capacity}]")
    flat = marked.pixels.ravel()
    parts = []
    for phase in (Phase.WHITE, Phase.BLACK):
        groups, _ = subsets(plan, phase)
        if groups.shape[0]:
            parts.append(extract_bit(integrate(flat[groups] >> 7), groups.shape[1]))
    bits = np.concatenate(parts) if parts else np.zeros(0, dtype=np.uint8)
    return xor_payload(bits[:payload_len], k_d)
