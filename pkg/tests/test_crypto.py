import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from rdhei.crypto import (
    KeyFormatError,
    KeyMaterial,
    bits_to_bytes,
    bytes_to_bits,
    ctr_keystream,
    fnv1a64,
    keyed_permutation,
    keystream,
    parse_key,
    read_key_file,
    scramble_generator,
    splitmix64,
    tag_word,
    xor_image,
    xor_payload,
)
from rdhei.image import GrayImage, histogram
from rdhei.lattice import DEFAULT_SEED

# NIST SP 800-38A, F.5.1 CTR-AES128.Encrypt
SP800_KEY = bytes.fromhex("2b7e151628aed2a6abf7158809cf4f3c")
SP800_CTR = bytes.fromhex("f0f1f2f3f4f5f6f7f8f9fafbfcfdfeff")
SP800_PT = bytes.fromhex(
    "6bc1bee22e409f96e93d7e117393172a"
    "ae2d8a571e03ac9c9eb76fac45af8e51"
    "30c81c46a35ce411e5fbc1191a0a52ef"
    "f69f2445df4f9b17ad2b417be66c3710"
)
SP800_CT = bytes.fromhex(
    "874d6191b620e3261bef6864990db6ce"
    "9806f66b7970fdff8617187bb9fffdff"
    "5ae4df3edbd5d35e5b4f09020db03eab"
    "1e031dda2fbe03d1792170a0f3009cee"
)


def test_ctr_known_answer():
    ks = ctr_keystream(SP800_KEY, SP800_CTR, 64)
    assert bytes(a ^ b for a, b in zip(ks, SP800_PT)) == SP800_CT


def test_aes_block_known_answer():
    # FIPS-197 C.1 and the all-zero AES-128 vector
    enc = Cipher(algorithms.AES(bytes(range(16))), modes.ECB()).encryptor()
    assert enc.update(bytes.fromhex("00112233445566778899aabbccddeeff")).hex() == "69c4e0d86a7b0430d8cdb78070b4c55a"
    zero = Cipher(algorithms.AES(bytes(16)), modes.ECB()).encryptor()
    assert zero.update(bytes(16)).hex() == "66e94bd4ef8a2c3b884cfa59ca342b2e"


def test_keystream_counter_layout():
    key = bytes(16)
    ecb = Cipher(algorithms.AES(key), modes.ECB()).encryptor()
    blocks = [tag_word("img") + i.to_bytes(8, "big") for i in range(2)]
    expected = b"".join(ecb.update(b) for b in blocks)
    assert keystream(key, "img", 32) == expected
    assert keystream(key, "img", 16).hex() == "3d89cb35a1ef13f77bffbd1e3337e658"


def test_keystream_basic():
    key = bytes(range(16))
    assert keystream(key, "img", 0) == b""
    assert keystream(key, "img", 100) == keystream(key, "img", 100)
    assert keystream(key, "img", 100)[:37] == keystream(key, "img", 37)
    assert keystream(key, "img", 64) != keystream(key, "data", 64)
    with pytest.raises(ValueError):
        keystream(key, "img", -1)


def test_xor_image_involution():
    img = GrayImage(np.random.default_rng(1).integers(0, 256, (17, 23)))
    key = bytes(range(16))
    enc = xor_image(img, key)
    assert enc.shape == img.shape and enc != img
    assert xor_image(enc, key) == img


def test_xor_image_zero_stream_hook():
    img = GrayImage(np.arange(30).reshape(5, 6))
    assert xor_image(img, bytes(16), stream=lambda k, t, n: bytes(n)) == img


def test_encrypted_histogram_uniform():
    scipy_stats = pytest.importorskip("scipy.stats")
    r, c = np.mgrid[0:512, 0:512]
    natural_like = GrayImage((128 + 60 * np.sin(r / 40.0) * np.cos(c / 55.0)).astype(np.uint8))
    h = histogram(xor_image(natural_like, bytes(range(16))))
    _, p = scipy_stats.chisquare(h)
    assert p > 0.01


@settings(max_examples=30)
@given(st.lists(st.integers(0, 1), max_size=1000), st.binary(min_size=16, max_size=16))
def test_xor_payload_involution(bits, key):
    bits = np.array(bits, dtype=np.uint8)
    out = xor_payload(xor_payload(bits, key), key)
    assert np.array_equal(out, bits)


def test_xor_payload_empty():
    assert xor_payload([], bytes(16)).size == 0


def test_xor_payload_msb_first():
    key = bytes(range(16))
    first = keystream(key, "data", 1)[0]
    out = xor_payload(np.zeros(8, np.uint8), key)
    assert out.tolist() == [(first >> (7 - i)) & 1 for i in range(8)]


def test_wrong_key_ber():
    rng = np.random.default_rng(7)
    bits = rng.integers(0, 2, 10_000).astype(np.uint8)
    enc = xor_payload(bits, bytes(range(16)))
    dec = xor_payload(enc, bytes(range(1, 17)))
    assert abs(np.mean(dec != bits) - 0.5) < 0.05


def test_bit_packing():
    assert bytes_to_bits(b"\xa0").tolist() == [1, 0, 1, 0, 0, 0, 0, 0]
    assert bits_to_bytes([1, 0, 1]) == b"\xa0"
    data = bytes(range(50))
    assert bits_to_bytes(bytes_to_bits(data)) == data


def test_keys():
    assert parse_key("00" * 16) == bytes(16)
    for bad in ("00" * 15, "zz" * 16, "0" * 33):
        with pytest.raises(KeyFormatError):
            parse_key(bad)
    with pytest.raises(KeyFormatError):
        KeyMaterial(bytes(15), bytes(16))
    km = KeyMaterial.random()
    assert km.k_e != km.k_d and "redacted" in repr(km)


def test_key_file(tmp_path):
    p = tmp_path / "k.bin"
    p.write_bytes(bytes(range(16)))
    assert read_key_file(p) == bytes(range(16))
    p.write_bytes(b"short")
    with pytest.raises(KeyFormatError):
        read_key_file(p)


def _fnv_ref(data):
    h = 14695981039346656037
    for b in data:
        h ^= b
        h = (h * 1099511628211) % 2**64
    return h


def _splitmix_ref(state, count):
    out = []
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) % 2**64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) % 2**64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) % 2**64
        out.append(z ^ (z >> 31))
    return out


def test_fnv_known_values():
    assert fnv1a64(b"") == 0xCBF29CE484222325
    assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a64(b"foobar") == 0x85944171F73967E8


def test_splitmix_reference_outputs():
    assert [int(x) for x in splitmix64(0, 3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]


@settings(max_examples=30)
@given(st.binary(max_size=32), st.integers(1, 50))
def test_scramble_matches_scalar_reference(seed, count):
    assert [int(x) for x in scramble_generator(seed, count)] == _splitmix_ref(_fnv_ref(seed), count)


def test_scramble_golden():
    assert int(scramble_generator(DEFAULT_SEED, 1)[0]) == 0x69E48333A289DE57
    assert keyed_permutation(10, b"golden").tolist() == [6, 1, 7, 4, 3, 9, 8, 2, 5, 0]


def test_scramble_tags_differ():
    assert scramble_generator(b"x/scramble/W", 1)[0] != scramble_generator(b"x/scramble/B", 1)[0]


def test_fisher_yates_small():
    assert keyed_permutation(0, b"s").tolist() == []
    assert keyed_permutation(1, b"s").tolist() == [0]


def test_fisher_yates_uniform_n3():
    scipy_stats = pytest.importorskip("scipy.stats")
    counts = Counter(tuple(keyed_permutation(3, i.to_bytes(4, "big")).tolist()) for i in range(6000))
    assert set(counts) == set(itertools.permutations(range(3)))
    _, p = scipy_stats.chisquare(list(counts.values()))
    assert p > 0.001
