"""Keystreams for image/payload encryption and the public scramble generator.

Encryption keystreams come from AES-128 in counter mode. The initial counter
block is ``tag_word || 0^64`` where ``tag_word`` is the first eight bytes of
SHA-256 over the domain tag, so streams for different tags occupy disjoint
regions of the counter space.

The scramble generator is not a cipher: FNV-1a 64 over the seed bytes gives
the initial state of a splitmix64 sequence. Both are fully specified so that
permutations are reproducible across implementations.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from typing import Callable

import numpy as np
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from rdhei.image import GrayImage

KEY_BYTES = 16
IMAGE_TAG = "img"
PAYLOAD_TAG = "data"

MASK64 = (1 << 64) - 1
FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

Keystream = Callable[[bytes, str, int], bytes]


class KeyFormatError(ValueError):
    pass


@dataclass(frozen=True, repr=False)
class KeyMaterial:
    """Independent image key ``k_e`` and data-hider key ``k_d``."""

    k_e: bytes
    k_d: bytes

    def __post_init__(self):
        for name in ("k_e", "k_d"):
            if len(getattr(self, name)) != KEY_BYTES:
                raise KeyFormatError(f"{name} must be {KEY_BYTES} bytes")

    @classmethod
    def random(cls) -> "KeyMaterial":
        return cls(os.urandom(KEY_BYTES), os.urandom(KEY_BYTES))

    def __repr__(self):
        return "KeyMaterial(<redacted>)"


def parse_key(text: str) -> bytes:
    """Parse a 128-bit key given as 32 hex characters."""
    text = text.strip()
    if len(text) != 2 * KEY_BYTES:
        raise KeyFormatError(f"key must be {2 * KEY_BYTES} hex characters, got {len(text)}")
    try:
        return bytes.fromhex(text)
    except ValueError as exc:
        raise KeyFormatError("key is not valid hex") from exc


def read_key_file(path) -> bytes:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) != KEY_BYTES:
        raise KeyFormatError(f"key file must hold exactly {KEY_BYTES} raw bytes, got {len(raw)}")
    return raw


def tag_word(tag: str) -> bytes:
    return hashlib.sha256(tag.encode("utf-8")).digest()[:8]


def ctr_keystream(key: bytes, initial_block: bytes, length: int) -> bytes:
    """Raw AES-CTR keystream starting at ``initial_block`` (128-bit big-endian counter)."""
    if length < 0:
        raise ValueError("length must be non-negative")
    if length == 0:
        return b""
    enc = Cipher(algorithms.AES(key), modes.CTR(initial_block)).encryptor()
    return enc.update(bytes(length)) + enc.finalize()


def keystream(key: bytes, tag: str, length: int) -> bytes:
    return ctr_keystream(key, tag_word(tag) + bytes(8), length)


def xor_image(img: GrayImage, key: bytes, tag: str = IMAGE_TAG, stream: Keystream = keystream) -> GrayImage:
    """XOR every pixel (raster order) with the keystream; an involution."""
    ks = np.frombuffer(stream(key, tag, img.width * img.height), dtype=np.uint8)
    return GrayImage(img.pixels ^ ks.reshape(img.shape))


def xor_payload(bits, key: bytes, tag: str = PAYLOAD_TAG, stream: Keystream = keystream) -> np.ndarray:
    """XOR a 0/1 bit array with the keystream expanded MSB-first."""
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    if bits.size == 0:
        return bits.copy()
    ks = np.frombuffer(stream(key, tag, (bits.size + 7) // 8), dtype=np.uint8)
    return bits ^ np.unpackbits(ks)[: bits.size]


def bytes_to_bits(data: bytes) -> np.ndarray:
    return np.unpackbits(np.frombuffer(data, dtype=np.uint8))


def bits_to_bytes(bits) -> bytes:
    """Pack MSB-first; a trailing partial byte is zero-filled."""
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()


def fnv1a64(data: bytes) -> int:
    h = FNV_OFFSET
    for b in data:
        h = ((h ^ b) * FNV_PRIME) & MASK64
    return h


def splitmix64(state: int, count: int) -> np.ndarray:
    """First ``count`` outputs of splitmix64 started from ``state``."""
    k = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(state) + k * np.uint64(GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
    return z


def scramble_generator(seed: bytes, count: int) -> np.ndarray:
    return splitmix64(fnv1a64(seed), count)


def keyed_permutation(n: int, seed: bytes) -> np.ndarray:
    """Fisher-Yates shuffle of ``range(n)``.

    For i = n-1 down to 1 the k-th generator word w_k (k = n-1-i) picks
    j = w_k mod (i+1) and swaps positions i and j.
    """
    perm = list(range(n))
    if n < 2:
        return np.array(perm, dtype=np.int64)
    words = scramble_generator(seed, n - 1)
    bounds = np.arange(n, 1, -1, dtype=np.uint64)
    picks = (words % bounds).tolist()
    for i, j in zip(range(n - 1, 0, -1), picks):
        perm[i], perm[j] = perm[j], perm[i]
    return np.array(perm, dtype=np.int64)
