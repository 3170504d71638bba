"""Binary index file (``RPSIIDX1``), little-endian throughout.

Layout::

    magic "RPSIIDX1" | u32 version=1 | u8 convention | 3 zero bytes
    u64 n | u64 sigma | u64 d | u64 r_prime
    256-byte alphabet map (0xFF marks unused bytes when sigma < 256)
    r_prime bytes: F-column symbol per sub-run
    r_prime x u32: tau
    bf, then bl: u8 low width | u64 count | low words | u64 high length | high words
    bfl: u64 length | words
    u64 FNV-1a-64 of every preceding byte

Bit i of a packed stream lives in word i // 64 at offset i % 64.
"""

from __future__ import annotations

import io
import struct
from typing import BinaryIO, Dict, List, Tuple

import numpy as np

from .bitvec import PlainBits, SparseBits, pack_words, unpack_words
from .psidx import PsiIndex, TauPermutation
from .textcore import Convention

MAGIC = b"RPSIIDX1"
VERSION = 1
UNUSED = 0xFF

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK = (1 << 64) - 1


class IndexFormatError(ValueError):
    pass


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _MASK
    return h


def _words(n_bits: int) -> int:
    return (n_bits + 63) // 64


def _pack_lows(lows: List[int], width: int) -> List[int]:
    if width == 0 or not lows:
        return []
    arr = np.asarray(lows, dtype=np.uint64)
    bits = ((arr[:, None] >> np.arange(width, dtype=np.uint64)) & np.uint64(1)).astype(np.uint8)
    return pack_words(bits.ravel())


def _unpack_lows(words: List[int], count: int, width: int) -> List[int]:
    if width == 0:
        return [0] * count
    bits = unpack_words(words, count * width).reshape(count, width).astype(np.int64)
    return (bits << np.arange(width, dtype=np.int64)).sum(axis=1).tolist()


def _u64s(values) -> bytes:
    return np.asarray(values, dtype="<u8").tobytes()


def _write_sparse(out: BinaryIO, v: SparseBits) -> None:
    lows = _pack_lows(v.lows, v.width)
    out.write(struct.pack("<BQ", v.width, v.count))
    out.write(_u64s(lows))
    out.write(struct.pack("<Q", v.high.length))
    out.write(_u64s(v.high.words))


def encode_alphabet(alphabet_map: Dict[int, int]) -> bytes:
    table = bytearray([UNUSED] * 256)
    for byte, sym in alphabet_map.items():
        table[byte] = sym
    return bytes(table)


def decode_alphabet(table: bytes, sigma: int) -> Dict[int, int]:
    if sigma == 256:
        return {b: table[b] for b in range(256)}
    return {b: table[b] for b in range(256) if table[b] != UNUSED}


def serialize(idx: PsiIndex) -> bytes:
    if idx.sigma > 256:
        raise ValueError("alphabet too large for the file format")
    if idx.r_prime >= 1 << 32:
        raise ValueError("r' does not fit in u32 tau entries")
    out = io.BytesIO()
    out.write(MAGIC)
    out.write(struct.pack("<IB3x", VERSION, int(idx.convention)))
    out.write(struct.pack("<4Q", idx.n, idx.sigma, idx.d, idx.r_prime))
    out.write(encode_alphabet(idx.alphabet_map))
    out.write(bytes(idx.tau.char_of_subrun))
    out.write(np.asarray(idx.tau.tau_flat, dtype="<u4").tobytes())
    _write_sparse(out, idx.bf)
    _write_sparse(out, idx.bl)
    out.write(struct.pack("<Q", idx.bfl.length))
    out.write(_u64s(idx.bfl.words))
    body = out.getvalue()
    return body + struct.pack("<Q", fnv1a64(body))


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, size: int) -> bytes:
        if self.pos + size > len(self.data):
            raise IndexFormatError("truncated index file")
        chunk = self.data[self.pos:self.pos + size]
        self.pos += size
        return chunk

    def unpack(self, fmt: str) -> Tuple:
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def u64s(self, count: int) -> List[int]:
        return np.frombuffer(self.take(8 * count), dtype="<u8").tolist()


def _read_sparse(rd: _Reader, universe: int) -> SparseBits:
    width, count = rd.unpack("<BQ")
    lows = _unpack_lows(rd.u64s(_words(count * width)), count, width)
    (high_len,) = rd.unpack("<Q")
    high = PlainBits.from_words(rd.u64s(_words(high_len)), high_len, select0=False)
    return SparseBits.from_parts(universe, width, lows, high)


def deserialize(data: bytes) -> PsiIndex:
    if len(data) < len(MAGIC) + 8 or data[: len(MAGIC)] != MAGIC:
        raise IndexFormatError("bad magic")
    body, (stored,) = data[:-8], struct.unpack("<Q", data[-8:])
    if fnv1a64(body) != stored:
        raise IndexFormatError("checksum mismatch")
    rd = _Reader(body)
    rd.take(len(MAGIC))
    version, convention = rd.unpack("<IB3x")
    if version != VERSION:
        raise IndexFormatError(f"unsupported version {version}")
    if convention not in (0, 1):
        raise IndexFormatError(f"unknown convention {convention}")
    n, sigma, d, r_prime = rd.unpack("<4Q")
    alphabet = decode_alphabet(rd.take(256), sigma)
    chars = list(rd.take(r_prime))
    tau = np.frombuffer(rd.take(4 * r_prime), dtype="<u4").tolist()
    try:
        bf = _read_sparse(rd, n)
        bl = _read_sparse(rd, n)
        (bfl_len,) = rd.unpack("<Q")
        bfl = PlainBits.from_words(rd.u64s(_words(bfl_len)), bfl_len)
    except ValueError as exc:
        raise IndexFormatError(str(exc)) from exc
    if rd.pos != len(body):
        raise IndexFormatError("trailing bytes before checksum")
    if bf.count != r_prime or bl.count != r_prime or bfl_len != 2 * r_prime:
        raise IndexFormatError("component sizes disagree with r'")
    return PsiIndex(n=n, sigma=sigma, d=d,
                    tau=TauPermutation.from_lists(chars, tau, sigma),
                    bl=bl, bf=bf, bfl=bfl,
                    convention=Convention(convention), alphabet_map=alphabet)


def save(idx: PsiIndex, path) -> int:
    data = serialize(idx)
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)


def load(path) -> PsiIndex:
    with open(path, "rb") as fh:
        return deserialize(fh.read())
