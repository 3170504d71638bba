"""Rank/select bitvectors.

Convention used throughout the package: ``rank(b, p)`` counts b-bits in
positions ``0..p`` inclusive, ``select(b, x)`` is the 0-based position of the
x-th b-bit with x counted from 1.

``PlainBits`` is an uncompressed vector with a two-level rank directory
(absolute counts per 512-bit superblock, relative counts per 64-bit word)
and sampled select.  ``SparseBits`` is an Elias-Fano encoding of an
increasing position list whose high parts live in a ``PlainBits``.
"""

from __future__ import annotations

from typing import Iterable, List, Sequence, Tuple

import numpy as np

WORD = 64
WORDS_PER_SUPER = 8
SAMPLE = 64
BLOCK_WIDTH = 9  # relative count inside a superblock is < 512

_FULL = (1 << WORD) - 1


def _byte_select_table() -> List[List[int]]:
    table = []
    for byte in range(256):
        table.append([i for i in range(8) if byte >> i & 1])
    return table


_BYTE_SELECT = _byte_select_table()
_POP8 = [len(t) for t in _BYTE_SELECT]


def _select_in_word(word: int, k: int) -> int:
    """Offset of the k-th (1-based) set bit of ``word``."""
    shift = 0
    while True:
        byte = word & 0xFF
        c = _POP8[byte]
        if k <= c:
            return shift + _BYTE_SELECT[byte][k - 1]
        k -= c
        word >>= 8
        shift += 8


def pack_words(bits: np.ndarray) -> List[int]:
    """Pack a 0/1 array into 64-bit words, bit i at word i // 64, offset i % 64."""
    packed = np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="little")
    pad = (-len(packed)) % 8
    if pad:
        packed = np.concatenate((packed, np.zeros(pad, dtype=np.uint8)))
    return np.frombuffer(packed.tobytes(), dtype="<u8").tolist()


def unpack_words(words: Sequence[int], length: int) -> np.ndarray:
    raw = np.asarray(words, dtype="<u8").view(np.uint8)
    return np.unpackbits(raw, bitorder="little")[:length]


def _width(m: int) -> int:
    return max(1, m.bit_length())


class PlainBits:
    def __init__(self, bits: Iterable = (), select0: bool = True):
        if isinstance(bits, str):
            bits = [ch == "1" for ch in bits if ch in "01"]
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits)
        arr = (arr != 0).astype(np.uint8)
        self._setup(pack_words(arr), len(arr), select0)

    @classmethod
    def from_words(cls, words: Sequence[int], length: int, select0: bool = True) -> "PlainBits":
        need = (length + WORD - 1) // WORD
        if len(words) != need:
            raise ValueError(f"expected {need} words for {length} bits, got {len(words)}")
        words = list(words)
        if words and length % WORD:
            if words[-1] >> (length % WORD):
                raise ValueError("set bits beyond vector length")
        obj = cls.__new__(cls)
        obj._setup(words, length, select0)
        return obj

    def _setup(self, words: List[int], length: int, select0: bool) -> None:
        self.words = words
        self.length = length
        self._super: List[int] = []
        self._block: List[int] = []
        total = 0
        for w, word in enumerate(words):
            if w % WORDS_PER_SUPER == 0:
                self._super.append(total)
            self._block.append(total - self._super[-1])
            total += word.bit_count()
        self.ones = total
        self.zeros = length - total
        self._samples1 = self._sample(1)
        self._samples0 = self._sample(0) if select0 else None

    def _word(self, w: int, b: int) -> int:
        word = self.words[w]
        if b:
            return word
        word = ~word & _FULL
        if w == len(self.words) - 1 and self.length % WORD:
            word &= (1 << (self.length % WORD)) - 1
        return word

    def _sample(self, b: int) -> List[int]:
        # word index holding the (k*SAMPLE + 1)-th b-bit
        samples = []
        seen = 0
        for w in range(len(self.words)):
            c = self._word(w, b).bit_count()
            while len(samples) * SAMPLE < seen + c:
                samples.append(w)
            seen += c
        return samples

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, p: int) -> int:
        if not 0 <= p < self.length:
            raise IndexError(f"position {p} out of range [0, {self.length})")
        return self.words[p >> 6] >> (p & 63) & 1

    def _before(self, w: int, b: int) -> int:
        ones = self._super[w >> 3] + self._block[w]
        return ones if b else w * WORD - ones

    def rank(self, b: int, p: int) -> int:
        """Number of ``b`` bits in positions 0..p."""
        if not 0 <= p < self.length:
            raise IndexError(f"rank position {p} out of range [0, {self.length})")
        w = p >> 6
        ones = (self._super[w >> 3] + self._block[w]
                + (self.words[w] & ((2 << (p & 63)) - 1)).bit_count())
        return ones if b else p + 1 - ones

    def rank1(self, p: int) -> int:
        return self.rank(1, p)

    def rank0(self, p: int) -> int:
        return self.rank(0, p)

    def select(self, b: int, x: int) -> int:
        """Position of the x-th ``b`` bit."""
        count = self.ones if b else self.zeros
        if not 1 <= x <= count:
            raise IndexError(f"select{b}({x}) out of range [1, {count}]")
        samples = self._samples1 if b else self._samples0
        if samples is None:
            raise ValueError("select0 directory was not built")
        w = samples[(x - 1) // SAMPLE]
        last = len(self.words) - 1
        while w < last and self._before(w + 1, b) < x:
            w += 1
        return w * WORD + _select_in_word(self._word(w, b), x - self._before(w, b))

    def select1(self, x: int) -> int:
        # same walk as select(1, x), inlined for the query hot path
        if not 1 <= x <= self.ones:
            raise IndexError(f"select1({x}) out of range [1, {self.ones}]")
        sup, blk = self._super, self._block
        w = self._samples1[(x - 1) >> 6]
        last = len(blk) - 1
        while w < last and sup[(w + 1) >> 3] + blk[w + 1] < x:
            w += 1
        k = x - sup[w >> 3] - blk[w]
        word = self.words[w]
        shift = w << 6
        while True:
            byte = word & 0xFF
            c = _POP8[byte]
            if k <= c:
                return shift + _BYTE_SELECT[byte][k - 1]
            k -= c
            word >>= 8
            shift += 8

    def select0(self, x: int) -> int:
        return self.select(0, x)

    def to01(self) -> str:
        return "".join("01"[b] for b in unpack_words(self.words, self.length))

    def space_bits(self) -> dict:
        idx = _width(self.length)
        samples = len(self._samples1) + (len(self._samples0 or ()))
        return {
            "payload": self.length,
            "directory": len(self._super) * idx + len(self._block) * BLOCK_WIDTH + samples * idx,
        }

    def __eq__(self, other) -> bool:
        return (isinstance(other, PlainBits) and self.length == other.length
                and self.words == other.words)

    def __repr__(self) -> str:
        return f"PlainBits(length={self.length}, ones={self.ones})"


class SparseBits:
    """Elias-Fano set of positions in ``[0, universe)``."""

    def __init__(self, positions: Iterable[int], universe: int):
        positions = [int(p) for p in positions]
        for a, b in zip(positions, positions[1:]):
            if b <= a:
                raise ValueError("positions must be strictly increasing")
        if positions and (positions[0] < 0 or positions[-1] >= universe):
            raise ValueError(f"positions must lie in [0, {universe})")
        count = len(positions)
        width = (universe // count).bit_length() - 1 if count else 0
        pos = np.asarray(positions, dtype=np.int64)
        high = np.zeros(count + (universe >> width) + 1, dtype=np.uint8)
        high[(pos >> width) + np.arange(count)] = 1
        self.universe = universe
        self.count = count
        self.width = width
        self.lows = (pos & ((1 << width) - 1)).tolist()
        self.high = PlainBits(high, select0=False)

    @classmethod
    def from_parts(cls, universe: int, width: int, lows: Sequence[int],
                   high: PlainBits) -> "SparseBits":
        if high.ones != len(lows):
            raise ValueError("high-part ones do not match low-part count")
        obj = cls.__new__(cls)
        obj.universe = universe
        obj.count = len(lows)
        obj.width = width
        obj.lows = list(lows)
        obj.high = high
        return obj

    def __len__(self) -> int:
        return self.count

    def select1(self, x: int) -> int:
        if not 1 <= x <= self.count:
            raise IndexError(f"select1({x}) out of range [1, {self.count}]")
        return (self.high.select1(x) - x + 1) << self.width | self.lows[x - 1]

    def positions(self) -> List[int]:
        return [self.select1(x) for x in range(1, self.count + 1)]

    def pred(self, p: int) -> Tuple[int, int]:
        """(ordinal, position) of the largest stored position <= p.

        Binary search over ordinals: O(log count), not a constant-time path.
        """
        if self.count == 0 or p < self.select1(1):
            raise ValueError(f"no stored position <= {p}")
        lo, hi = 1, self.count
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.select1(mid) <= p:
                lo = mid
            else:
                hi = mid - 1
        return lo, self.select1(lo)

    def rank1(self, p: int) -> int:
        if not 0 <= p < self.universe:
            raise IndexError(f"rank position {p} out of range [0, {self.universe})")
        if self.count == 0 or p < self.select1(1):
            return 0
        return self.pred(p)[0]

    def to01(self) -> str:
        bits = ["0"] * self.universe
        for p in self.positions():
            bits[p] = "1"
        return "".join(bits)

    def space_bits(self) -> dict:
        high = self.high.space_bits()
        return {
            "low": self.count * self.width,
            "high": high["payload"],
            "directory": high["directory"],
        }

    def __repr__(self) -> str:
        return f"SparseBits(universe={self.universe}, count={self.count}, width={self.width})"

